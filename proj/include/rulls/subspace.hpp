#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "rulls/dataset.hpp"

namespace rulls {

/// Local linear approximation around one landmark: an orthonormal basis
/// (rows), the neighborhood center, and the per-feature inverse scale used
/// during fitting (all ones when neighborhood normalization is off, zero for
/// zero-variance features).
struct Subspace {
    Eigen::MatrixXd basis;               // d x m, orthonormal rows
    Eigen::VectorXd center;              // length m
    Eigen::VectorXd scale_inv;           // length m
    Eigen::VectorXd explained_variance;  // length d, non-increasing

    int dim() const { return static_cast<int>(basis.rows()); }
};

struct Neighborhood {
    std::vector<int> members;  // k_eps row indices, nearest first
    int landmark = -1;
};

/// The k_eps rows nearest to the landmark row in Euclidean distance,
/// landmark included. Ties broken by ascending row index.
Neighborhood knn_neighborhood(const Dataset& d, int landmark, int k_eps);

/// Smallest d such that the top-d eigenvalue mass reaches
/// threshold * total. Eigenvalues must be sorted non-increasing.
int dimension_for_threshold(const Eigen::VectorXd& eigenvalues, double threshold);

/// PCA of the centered (optionally neighborhood-z-scored) neighborhood via
/// thin SVD. Keeps the smallest dimension count explaining
/// variance_threshold of the total variance. Each basis vector's
/// largest-magnitude entry is made positive.
Subspace fit_pca(const Dataset& d, const Neighborhood& nb,
                 double variance_threshold, bool normalize);

/// One round of residual trimming: fit, discard the floor(trim_fraction*k)
/// points with the largest orthogonal reconstruction residual, refit.
Subspace fit_robust_pca(const Dataset& d, const Neighborhood& nb,
                        double variance_threshold, bool normalize,
                        double trim_fraction);

/// Map every dataset row to subspace coordinates: basis * scale * (x - center).
Eigen::MatrixXd project(const Dataset& d, const Subspace& s);

/// Gaussian random projection to target_dim dimensions, entries scaled by
/// 1/sqrt(target_dim).
Eigen::MatrixXd random_projection(const Dataset& d, int target_dim,
                                  std::uint64_t seed);

/// Keep `count` distinct uniformly chosen columns, in ascending index order.
std::pair<Dataset, std::vector<int>> subsample_features(const Dataset& d,
                                                        int count,
                                                        std::uint64_t seed);

}  // namespace rulls
