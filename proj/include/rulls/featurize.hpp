#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rulls/dataset.hpp"
#include "rulls/sparse.hpp"

namespace rulls {

enum class Method { Rulls, RullsRobust, Variant1, Variant2, RandLocal };

Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

/// All featurization hyperparameters. Zero means "derive the default":
/// landmarks from default_landmark_count(N), projection_dim from 0.2*m.
struct FeatureConfig {
    Method method = Method::Rulls;
    int iterations = 100;          // T
    int landmarks = 0;             // l_p
    int nearest = 10;              // l_k
    int k_eps = 30;
    double reg_p = 1e-4;
    double variance_threshold = 0.95;
    bool normalize = false;
    int projection_dim = 0;        // d, variant1/variant2/randlocal
    double trim_fraction = 0.25;   // rulls_robust
    std::uint64_t seed = 0;
};

/// Config with all derived defaults filled in and ranges validated against
/// the dataset shape. Throws ConfigError before any work is done.
FeatureConfig resolve_config(const FeatureConfig& cfg, const Dataset& d);

/// l_p distinct row indices drawn uniformly without replacement.
std::vector<int> pick_landmarks(const Dataset& d, int l_p, std::uint64_t seed);

/// min(floor(N/2), 1024).
int default_landmark_count(int n);

/// max(mean_dist - dist, reg_p * mean_dist); strictly positive.
double encode_row(double mean_dist, double dist, double reg_p);

SparseFeatureMatrix rulls_features(const Dataset& d, const FeatureConfig& cfg);
SparseFeatureMatrix variant1_features(const Dataset& d, const FeatureConfig& cfg);
SparseFeatureMatrix variant2_features(const Dataset& d, const FeatureConfig& cfg);
SparseFeatureMatrix randlocal_features(const Dataset& d, const FeatureConfig& cfg);

/// Dispatch on cfg.method.
SparseFeatureMatrix compute_features(const Dataset& d, const FeatureConfig& cfg);

}  // namespace rulls
