#include "rulls/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rulls/errors.hpp"
#include "rulls/rng.hpp"
#include "rulls/subspace.hpp"

namespace rulls {

Method method_from_string(const std::string& name) {
    if (name == "rulls") return Method::Rulls;
    if (name == "rulls-robust" || name == "rulls_robust") return Method::RullsRobust;
    if (name == "variant1") return Method::Variant1;
    if (name == "variant2") return Method::Variant2;
    if (name == "randlocal") return Method::RandLocal;
    throw ConfigError("unknown method: " + name);
}

std::string method_to_string(Method m) {
    switch (m) {
        case Method::Rulls: return "rulls";
        case Method::RullsRobust: return "rulls-robust";
        case Method::Variant1: return "variant1";
        case Method::Variant2: return "variant2";
        case Method::RandLocal: return "randlocal";
    }
    return "?";
}

int default_landmark_count(int n) {
    if (n < 4) throw ConfigError("need at least 4 rows for the landmark default");
    return std::min(n / 2, 1024);
}

FeatureConfig resolve_config(const FeatureConfig& cfg, const Dataset& d) {
    FeatureConfig r = cfg;
    const int n = d.rows();
    const int m = d.cols();

    if (r.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (r.reg_p <= 0.0) throw ConfigError("reg_p must be positive");
    if (r.variance_threshold <= 0.0 || r.variance_threshold > 1.0)
        throw ConfigError("variance threshold must be in (0, 1]");
    if (r.trim_fraction < 0.0 || r.trim_fraction >= 0.5)
        throw ConfigError("trim fraction must be in [0, 0.5)");

    if (r.landmarks == 0) r.landmarks = default_landmark_count(n);
    if (r.landmarks < 1 || r.landmarks >= n)
        throw ConfigError("landmark count must satisfy 1 <= l_p < N");

    if (r.method == Method::RandLocal) {
        r.nearest = 1;  // the baseline encodes a single nearest landmark
        if (r.landmarks < 2)
            throw ConfigError("randlocal needs at least 2 landmarks");
    } else {
        if (r.nearest < 1 || r.nearest >= r.landmarks)
            throw ConfigError("nearest count must satisfy 1 <= l_k < l_p");
    }

    if (r.method == Method::Rulls || r.method == Method::RullsRobust) {
        if (r.k_eps < 2 || r.k_eps > n)
            throw ConfigError("k_eps must be in [2, N]");
    } else {
        if (r.projection_dim == 0)
            r.projection_dim = std::max(1, static_cast<int>(std::floor(0.2 * m)));
        if (r.projection_dim < 1 || r.projection_dim > m)
            throw ConfigError("projection dimension must be in [1, m]");
    }
    return r;
}

std::vector<int> pick_landmarks(const Dataset& d, int l_p, std::uint64_t seed) {
    const int n = d.rows();
    if (l_p >= n) throw ConfigError("landmark count must be less than N");
    if (l_p < 1) throw ConfigError("landmark count must be positive");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto eng = make_engine(derive_seed(seed, streams::kLandmarks));
    for (int i = 0; i < l_p; ++i) {
        std::uniform_int_distribution<int> dist(i, n - 1);
        std::swap(idx[i], idx[dist(eng)]);
    }
    idx.resize(l_p);
    return idx;
}

double encode_row(double mean_dist, double dist, double reg_p) {
    if (mean_dist <= 0.0)
        throw DegeneracyError("mean landmark distance is zero");
    return std::max(mean_dist - dist, reg_p * mean_dist);
}

namespace {

// Fill one iteration block of the feature matrix from the distance block D
// (column j = distances of all points to landmark j in that landmark's
// space). Nearest-landmark ties break by ascending landmark index.
void encode_block(const Eigen::MatrixXd& dist_block,
                  const std::vector<int>& landmarks, const FeatureConfig& cfg,
                  int iteration, bool exclude_self, SparseFeatureMatrix& out) {
    const int n = static_cast<int>(dist_block.rows());
    const int l_p = static_cast<int>(dist_block.cols());
    const long base = static_cast<long>(iteration) * l_p;

    std::vector<int> order(l_p);
    std::vector<int> chosen;
    for (int i = 0; i < n; ++i) {
        const double mean = dist_block.row(i).mean();
        std::iota(order.begin(), order.end(), 0);
        const int want = cfg.nearest + (exclude_self ? 1 : 0);
        std::partial_sort(order.begin(),
                          order.begin() + std::min(want, l_p), order.end(),
                          [&](int a, int b) {
                              double da = dist_block(i, a), db = dist_block(i, b);
                              return da < db || (da == db && a < b);
                          });
        chosen.clear();
        if (exclude_self) {
            int pos = 0;
            if (landmarks[order[0]] == i) pos = 1;  // next nearest instead
            chosen.push_back(order[pos]);
        } else {
            chosen.assign(order.begin(), order.begin() + cfg.nearest);
        }
        std::sort(chosen.begin(), chosen.end());
        for (int j : chosen)
            out.entries[i].emplace_back(base + j,
                                        encode_row(mean, dist_block(i, j), cfg.reg_p));
    }
}

SparseFeatureMatrix make_output(const Dataset& d, const FeatureConfig& cfg) {
    SparseFeatureMatrix f;
    f.rows = d.rows();
    f.cols = static_cast<long>(cfg.landmarks) * cfg.iterations;
    f.entries.assign(f.rows, {});
    return f;
}

Eigen::MatrixXd landmark_distances(const Eigen::MatrixXd& points,
                                   const std::vector<int>& landmarks) {
    Eigen::MatrixXd dist(points.rows(), landmarks.size());
    for (size_t j = 0; j < landmarks.size(); ++j)
        dist.col(j) =
            (points.rowwise() - points.row(landmarks[j])).rowwise().norm();
    return dist;
}

}  // namespace

SparseFeatureMatrix rulls_features(const Dataset& d, const FeatureConfig& raw_cfg) {
    FeatureConfig cfg = resolve_config(raw_cfg, d);
    if (cfg.method != Method::Rulls && cfg.method != Method::RullsRobust)
        throw ConfigError("rulls_features expects a rulls method");
    const bool robust = cfg.method == Method::RullsRobust;

    SparseFeatureMatrix out = make_output(d, cfg);
    Eigen::MatrixXd dist_block(d.rows(), cfg.landmarks);
    for (int t = 0; t < cfg.iterations; ++t) {
        const std::uint64_t iter_seed =
            derive_seed(cfg.seed, streams::kIteration, static_cast<std::uint64_t>(t));
        const auto landmarks = pick_landmarks(d, cfg.landmarks, iter_seed);
        for (int j = 0; j < cfg.landmarks; ++j) {
            const int lm = landmarks[j];
            Neighborhood nb = knn_neighborhood(d, lm, cfg.k_eps);
            Subspace sub =
                robust ? fit_robust_pca(d, nb, cfg.variance_threshold,
                                        cfg.normalize, cfg.trim_fraction)
                       : fit_pca(d, nb, cfg.variance_threshold, cfg.normalize);
            Eigen::MatrixXd coords = project(d, sub);
            dist_block.col(j) =
                (coords.rowwise() - coords.row(lm)).rowwise().norm();
        }
        encode_block(dist_block, landmarks, cfg, t, /*exclude_self=*/false, out);
    }
    return out;
}

SparseFeatureMatrix variant1_features(const Dataset& d, const FeatureConfig& raw_cfg) {
    FeatureConfig cfg = resolve_config(raw_cfg, d);
    SparseFeatureMatrix out = make_output(d, cfg);
    for (int t = 0; t < cfg.iterations; ++t) {
        const std::uint64_t iter_seed =
            derive_seed(cfg.seed, streams::kIteration, static_cast<std::uint64_t>(t));
        const auto landmarks = pick_landmarks(d, cfg.landmarks, iter_seed);
        Eigen::MatrixXd projected =
            random_projection(d, cfg.projection_dim, iter_seed);
        encode_block(landmark_distances(projected, landmarks), landmarks, cfg, t,
                     /*exclude_self=*/false, out);
    }
    return out;
}

SparseFeatureMatrix variant2_features(const Dataset& d, const FeatureConfig& raw_cfg) {
    FeatureConfig cfg = resolve_config(raw_cfg, d);
    SparseFeatureMatrix out = make_output(d, cfg);
    for (int t = 0; t < cfg.iterations; ++t) {
        const std::uint64_t iter_seed =
            derive_seed(cfg.seed, streams::kIteration, static_cast<std::uint64_t>(t));
        const auto landmarks = pick_landmarks(d, cfg.landmarks, iter_seed);
        auto [sub, cols] = subsample_features(d, cfg.projection_dim, iter_seed);
        encode_block(landmark_distances(sub.values, landmarks), landmarks, cfg, t,
                     /*exclude_self=*/false, out);
    }
    return out;
}

SparseFeatureMatrix randlocal_features(const Dataset& d, const FeatureConfig& raw_cfg) {
    FeatureConfig cfg = resolve_config(raw_cfg, d);
    SparseFeatureMatrix out = make_output(d, cfg);
    for (int t = 0; t < cfg.iterations; ++t) {
        const std::uint64_t iter_seed =
            derive_seed(cfg.seed, streams::kIteration, static_cast<std::uint64_t>(t));
        const auto landmarks = pick_landmarks(d, cfg.landmarks, iter_seed);
        auto [sub, cols] = subsample_features(d, cfg.projection_dim, iter_seed);
        encode_block(landmark_distances(sub.values, landmarks), landmarks, cfg, t,
                     /*exclude_self=*/true, out);
    }
    return out;
}

SparseFeatureMatrix compute_features(const Dataset& d, const FeatureConfig& cfg) {
    switch (cfg.method) {
        case Method::Rulls:
        case Method::RullsRobust: return rulls_features(d, cfg);
        case Method::Variant1: return variant1_features(d, cfg);
        case Method::Variant2: return variant2_features(d, cfg);
        case Method::RandLocal: return randlocal_features(d, cfg);
    }
    throw ConfigError("unknown method");
}

}  // namespace rulls
