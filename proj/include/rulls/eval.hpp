#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "rulls/sparse.hpp"

namespace rulls {

/// Uniform row-major feature access for both dense matrices and sparse
/// feature matrices, so the classifier and k-means run on either.
struct FeatureRows {
    long dim = 0;
    std::vector<std::vector<std::pair<long, double>>> rows;

    int count() const { return static_cast<int>(rows.size()); }

    static FeatureRows from_dense(const Eigen::MatrixXd& m);
    static FeatureRows from_sparse(const SparseFeatureMatrix& f);

    FeatureRows select(const std::vector<int>& indices) const;
};

/// One-vs-rest linear max-margin model. feature_scale is the input scaling
/// applied during training and must be re-applied at prediction time.
struct ClassifierModel {
    Eigen::MatrixXd weights;  // C x F
    Eigen::VectorXd bias;     // C
    int classes = 0;
    double feature_scale = 1.0;
};

/// Hinge-loss one-vs-rest training by stochastic subgradient descent with a
/// 1/(lambda*t) step schedule and iterate averaging over the second half.
ClassifierModel train_linear_classifier(const FeatureRows& features,
                                        const std::vector<int>& labels,
                                        int epochs, double lambda,
                                        std::uint64_t seed);

/// Fraction of rows whose argmax score matches the label; argmax ties break
/// toward the smallest class index.
double accuracy(const ClassifierModel& model, const FeatureRows& features,
                const std::vector<int>& labels);

struct ClusterAssignment {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;            // k x F
    std::vector<double> objective_trace;  // within-cluster sum of squares per iteration
};

/// Lloyd's algorithm with k-means++ style seeding. Empty clusters are
/// re-seeded to the point farthest from its centroid.
ClusterAssignment kmeans(const FeatureRows& features, int k, int max_iter,
                         std::uint64_t seed);

/// Normalized mutual information I(a;b)/sqrt(H(a)H(b)), natural logs.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace rulls
