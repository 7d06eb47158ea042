#include "rulls/subspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rulls/errors.hpp"
#include "rulls/rng.hpp"

namespace rulls {

Neighborhood knn_neighborhood(const Dataset& d, int landmark, int k_eps) {
    const int n = d.rows();
    if (landmark < 0 || landmark >= n) throw ConfigError("landmark index out of range");
    if (k_eps < 1 || k_eps > n) throw ConfigError("k_eps must be in [1, N]");

    std::vector<std::pair<double, int>> dist(n);
    for (int i = 0; i < n; ++i) {
        double d2 = (d.values.row(i) - d.values.row(landmark)).squaredNorm();
        dist[i] = {d2, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + k_eps, dist.end());

    Neighborhood nb;
    nb.landmark = landmark;
    nb.members.reserve(k_eps);
    for (int i = 0; i < k_eps; ++i) nb.members.push_back(dist[i].second);
    return nb;
}

int dimension_for_threshold(const Eigen::VectorXd& eigenvalues, double threshold) {
    double total = eigenvalues.sum();
    if (total <= 0.0) throw DegeneracyError("zero total variance");
    double cum = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        cum += eigenvalues(i);
        if (cum / total >= threshold - 1e-9) return i + 1;
    }
    return static_cast<int>(eigenvalues.size());
}

namespace {

void fix_signs(Eigen::MatrixXd& basis) {
    for (int r = 0; r < basis.rows(); ++r) {
        int imax = 0;
        double vmax = 0.0;
        for (int c = 0; c < basis.cols(); ++c) {
            double a = std::abs(basis(r, c));
            if (a > vmax) {
                vmax = a;
                imax = c;
            }
        }
        if (basis(r, imax) < 0) basis.row(r) = -basis.row(r);
    }
}

// Core fit on an explicit neighborhood row matrix.
Subspace fit_rows(const Eigen::MatrixXd& rows, double variance_threshold,
                  bool normalize) {
    const int k = static_cast<int>(rows.rows());
    const int m = static_cast<int>(rows.cols());
    if (k < 2) throw ConfigError("neighborhood needs at least 2 points");
    if (variance_threshold <= 0.0 || variance_threshold > 1.0)
        throw ConfigError("variance threshold must be in (0, 1]");

    Subspace s;
    s.center = rows.colwise().mean();
    s.scale_inv = Eigen::VectorXd::Ones(m);
    if (normalize) {
        for (int c = 0; c < m; ++c) {
            double var = (rows.col(c).array() - s.center(c)).square().sum() / k;
            double sd = std::sqrt(var);
            s.scale_inv(c) = sd > 0 ? 1.0 / sd : 0.0;  // zero-variance -> zero
        }
    }

    Eigen::MatrixXd centered =
        (rows.rowwise() - s.center.transpose()) * s.scale_inv.asDiagonal();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    Eigen::VectorXd ev = svd.singularValues().array().square();
    if (ev.sum() <= 0.0)
        throw DegeneracyError("degenerate neighborhood: all points identical");

    int dim = dimension_for_threshold(ev, variance_threshold);
    s.basis = svd.matrixV().leftCols(dim).transpose();
    fix_signs(s.basis);
    s.explained_variance = ev.head(dim) / (k - 1);
    return s;
}

Eigen::MatrixXd gather_rows(const Dataset& d, const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), d.cols());
    for (size_t i = 0; i < idx.size(); ++i) out.row(i) = d.values.row(idx[i]);
    return out;
}

}  // namespace

Subspace fit_pca(const Dataset& d, const Neighborhood& nb,
                 double variance_threshold, bool normalize) {
    return fit_rows(gather_rows(d, nb.members), variance_threshold, normalize);
}

Subspace fit_robust_pca(const Dataset& d, const Neighborhood& nb,
                        double variance_threshold, bool normalize,
                        double trim_fraction) {
    if (trim_fraction < 0.0 || trim_fraction >= 0.5)
        throw ConfigError("trim fraction must be in [0, 0.5)");
    Eigen::MatrixXd rows = gather_rows(d, nb.members);
    Subspace first = fit_rows(rows, variance_threshold, normalize);

    const int k = static_cast<int>(rows.rows());
    const int ndrop = static_cast<int>(std::floor(trim_fraction * k));
    if (ndrop == 0) return first;
    if (k - ndrop < 2) throw ConfigError("trimmed neighborhood too small");

    Eigen::MatrixXd centered =
        (rows.rowwise() - first.center.transpose()) * first.scale_inv.asDiagonal();
    Eigen::MatrixXd coords = centered * first.basis.transpose();
    Eigen::VectorXd resid =
        (centered - coords * first.basis).rowwise().squaredNorm();

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return resid(a) > resid(b);
    });

    std::vector<int> keep(order.begin() + ndrop, order.end());
    std::sort(keep.begin(), keep.end());
    Eigen::MatrixXd kept(keep.size(), rows.cols());
    for (size_t i = 0; i < keep.size(); ++i) kept.row(i) = rows.row(keep[i]);
    return fit_rows(kept, variance_threshold, normalize);
}

Eigen::MatrixXd project(const Dataset& d, const Subspace& s) {
    if (d.cols() != s.basis.cols())
        throw ConfigError("dimension mismatch between dataset and subspace");
    Eigen::MatrixXd scaled =
        (d.values.rowwise() - s.center.transpose()) * s.scale_inv.asDiagonal();
    return scaled * s.basis.transpose();
}

Eigen::MatrixXd random_projection(const Dataset& d, int target_dim,
                                  std::uint64_t seed) {
    const int m = d.cols();
    if (target_dim < 1 || target_dim > m)
        throw ConfigError("projection dimension must be in [1, m]");
    auto eng = make_engine(derive_seed(seed, streams::kProjection));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd proj(m, target_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < target_dim; ++c) proj(r, c) = gauss(eng) * scale;
    return d.values * proj;
}

std::pair<Dataset, std::vector<int>> subsample_features(const Dataset& d,
                                                        int count,
                                                        std::uint64_t seed) {
    const int m = d.cols();
    if (count < 1 || count > m) throw ConfigError("feature count must be in [1, m]");
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    auto eng = make_engine(derive_seed(seed, streams::kSubsample));
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> dist(i, m - 1);
        std::swap(idx[i], idx[dist(eng)]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());

    Dataset out;
    out.labels = d.labels;
    out.values.resize(d.rows(), count);
    for (int c = 0; c < count; ++c) out.values.col(c) = d.values.col(idx[c]);
    if (!d.feature_names.empty())
        for (int c : idx) out.feature_names.push_back(d.feature_names[c]);
    return {std::move(out), std::move(idx)};
}

}  // namespace rulls
