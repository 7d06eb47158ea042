#include "rulls/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "rulls/errors.hpp"
#include "rulls/rng.hpp"

namespace rulls {

FeatureRows FeatureRows::from_dense(const Eigen::MatrixXd& m) {
    FeatureRows f;
    f.dim = m.cols();
    f.rows.resize(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        f.rows[i].reserve(m.cols());
        for (int c = 0; c < m.cols(); ++c)
            if (m(i, c) != 0.0) f.rows[i].emplace_back(c, m(i, c));
    }
    return f;
}

FeatureRows FeatureRows::from_sparse(const SparseFeatureMatrix& s) {
    FeatureRows f;
    f.dim = s.cols;
    f.rows = s.entries;
    return f;
}

FeatureRows FeatureRows::select(const std::vector<int>& indices) const {
    FeatureRows f;
    f.dim = dim;
    f.rows.reserve(indices.size());
    for (int i : indices) f.rows.push_back(rows.at(i));
    return f;
}

namespace {

double row_norm(const std::vector<std::pair<long, double>>& row) {
    double s = 0;
    for (const auto& [c, v] : row) s += v * v;
    return std::sqrt(s);
}

double sparse_dot(const Eigen::MatrixXd& dense, int dense_row,
                  const std::vector<std::pair<long, double>>& row) {
    double s = 0;
    for (const auto& [c, v] : row) s += dense(dense_row, c) * v;
    return s;
}

}  // namespace

ClassifierModel train_linear_classifier(const FeatureRows& features,
                                        const std::vector<int>& labels,
                                        int epochs, double lambda,
                                        std::uint64_t seed) {
    const int n = features.count();
    if (n == 0 || labels.size() != static_cast<size_t>(n))
        throw ConfigError("feature rows and labels must have equal nonzero length");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (lambda <= 0.0) throw ConfigError("lambda must be positive");
    int classes = 0;
    for (int l : labels) {
        if (l < 0) throw ConfigError("labels must be non-negative");
        classes = std::max(classes, l + 1);
    }
    if (classes < 2) throw ConfigError("training needs at least 2 classes");

    // Scale inputs to unit mean row norm; kept in the model.
    double mean_norm = 0;
    for (const auto& r : features.rows) mean_norm += row_norm(r);
    mean_norm /= n;
    const double scale = mean_norm > 0 ? 1.0 / mean_norm : 1.0;

    const long f_dim = features.dim;
    // Pegasos-style scalar representation: W_c = s * V_c. The decay factor
    // is shared across classes, and iterate averages over the second half of
    // the epochs are tracked lazily as S * V_c - M_c.
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(classes, f_dim);
    Eigen::MatrixXd m_corr = Eigen::MatrixXd::Zero(classes, f_dim);
    Eigen::VectorXd bias = Eigen::VectorXd::Zero(classes);
    Eigen::VectorXd bias_sum = Eigen::VectorXd::Zero(classes);
    double s = 1.0;
    double s_sum = 0.0;
    long n_avg = 0;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto eng = make_engine(derive_seed(seed, /*stream=*/0x5eed));
    long t = 0;
    const int avg_from = epochs / 2;

    for (int ep = 0; ep < epochs; ++ep) {
        for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
            std::uniform_int_distribution<int> dist(0, i);
            std::swap(perm[i], perm[dist(eng)]);
        }
        const bool averaging = ep >= avg_from;
        for (int pi = 0; pi < n; ++pi) {
            const int i = perm[pi];
            const auto& row = features.rows[i];
            ++t;
            const double eta = 1.0 / (lambda * (t + 1));
            const double decay = 1.0 - eta * lambda;  // = t / (t + 1)
            s *= decay;
            bias *= decay;
            for (int c = 0; c < classes; ++c) {
                const double yc = labels[i] == c ? 1.0 : -1.0;
                const double margin =
                    yc * (s * sparse_dot(v, c, row) * scale + bias(c));
                if (margin < 1.0) {
                    const double coeff = eta * yc / s * scale;  // = yc/lambda * scale
                    for (const auto& [col, val] : row) {
                        const double delta = coeff * val;
                        v(c, col) += delta;
                        m_corr(c, col) += s_sum * delta;
                    }
                    bias(c) += eta * yc;
                }
            }
            if (averaging) {
                s_sum += s;
                bias_sum += bias;
                ++n_avg;
            }
        }
    }

    ClassifierModel model;
    model.classes = classes;
    model.feature_scale = scale;
    model.weights = (s_sum * v - m_corr) / static_cast<double>(n_avg);
    model.bias = bias_sum / static_cast<double>(n_avg);
    if (!model.weights.allFinite())
        throw DegeneracyError("classifier training produced non-finite weights");
    return model;
}

double accuracy(const ClassifierModel& model, const FeatureRows& features,
                const std::vector<int>& labels) {
    const int n = features.count();
    if (n == 0) throw ConfigError("empty evaluation set");
    if (labels.size() != static_cast<size_t>(n))
        throw ConfigError("feature rows and labels must have equal length");
    int correct = 0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < model.classes; ++c) {
            double score = sparse_dot(model.weights, c, features.rows[i]) *
                               model.feature_scale +
                           model.bias(c);
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        if (best == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / n;
}

namespace {

double point_centroid_dist2(const std::vector<std::pair<long, double>>& row,
                            double row_sq, const Eigen::MatrixXd& centroids,
                            int c, double centroid_sq) {
    return std::max(0.0, row_sq - 2.0 * sparse_dot(centroids, c, row) + centroid_sq);
}

}  // namespace

ClusterAssignment kmeans(const FeatureRows& features, int k, int max_iter,
                         std::uint64_t seed) {
    const int n = features.count();
    if (k < 1 || k > n) throw ConfigError("k must be in [1, N]");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    const long f_dim = features.dim;

    std::vector<double> row_sq(n);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (const auto& [c, v] : features.rows[i]) s += v * v;
        row_sq[i] = s;
    }

    auto eng = make_engine(derive_seed(seed, /*stream=*/0x4bea));
    Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, f_dim);
    Eigen::VectorXd centroid_sq = Eigen::VectorXd::Zero(k);

    auto set_centroid = [&](int c, int point) {
        centroids.row(c).setZero();
        for (const auto& [col, v] : features.rows[point]) centroids(c, col) = v;
        centroid_sq(c) = row_sq[point];
    };

    // k-means++ seeding: first uniform, then proportional to squared distance
    // from the nearest chosen centroid.
    {
        std::uniform_int_distribution<int> uni(0, n - 1);
        set_centroid(0, uni(eng));
        std::vector<double> d2(n);
        for (int c = 1; c < k; ++c) {
            double total = 0;
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (int cc = 0; cc < c; ++cc)
                    best = std::min(best,
                                    point_centroid_dist2(features.rows[i], row_sq[i],
                                                         centroids, cc,
                                                         centroid_sq(cc)));
                d2[i] = best;
                total += best;
            }
            int pick = 0;
            if (total > 0) {
                std::uniform_real_distribution<double> ur(0.0, total);
                double r = ur(eng);
                double acc = 0;
                for (int i = 0; i < n; ++i) {
                    acc += d2[i];
                    if (acc >= r) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = uni(eng);
            }
            set_centroid(c, pick);
        }
    }

    ClusterAssignment result;
    result.labels.assign(n, -1);
    std::vector<int> counts(k);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double objective = 0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = point_centroid_dist2(features.rows[i], row_sq[i],
                                                centroids, c, centroid_sq(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            objective += best_d;
            if (result.labels[i] != best) {
                result.labels[i] = best;
                changed = true;
            }
        }
        result.objective_trace.push_back(objective);
        if (!changed) break;

        centroids.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            for (const auto& [col, v] : features.rows[i])
                centroids(result.labels[i], col) += v;
            ++counts[result.labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centroids.row(c) /= counts[c];
                centroid_sq(c) = centroids.row(c).squaredNorm();
            }
        }
        // Re-seed empty clusters to the point farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                int far_i = 0;
                double far_d = -1;
                for (int i = 0; i < n; ++i) {
                    double d = point_centroid_dist2(
                        features.rows[i], row_sq[i], centroids,
                        result.labels[i], centroid_sq(result.labels[i]));
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                set_centroid(c, far_i);
                result.labels[far_i] = c;
            }
        }
    }
    result.centroids = std::move(centroids);
    return result;
}

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw ConfigError("nmi inputs must have equal length");
    if (a.empty()) throw ConfigError("nmi inputs must be non-empty");
    const double n = static_cast<double>(a.size());

    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pab;
    for (size_t i = 0; i < a.size(); ++i) {
        pa[a[i]] += 1;
        pb[b[i]] += 1;
        pab[{a[i], b[i]}] += 1;
    }
    double ha = 0, hb = 0, mi = 0;
    for (auto& [_, c] : pa) ha -= (c / n) * std::log(c / n);
    for (auto& [_, c] : pb) hb -= (c / n) * std::log(c / n);
    for (auto& [key, c] : pab) {
        double pxy = c / n;
        double px = pa[key.first] / n;
        double py = pb[key.second] / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    if (ha <= 0 && hb <= 0) return 1.0;  // both trivial partitions
    if (ha <= 0 || hb <= 0) return 0.0;
    return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

}  // namespace rulls
