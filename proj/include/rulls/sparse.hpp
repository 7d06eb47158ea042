#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rulls {

/// Row-major sparse non-negative matrix. Within each row the column indices
/// are strictly increasing and every stored value is positive.
struct SparseFeatureMatrix {
    int rows = 0;
    long cols = 0;
    std::vector<std::vector<std::pair<long, double>>> entries;  // per row

    long nnz() const {
        long n = 0;
        for (const auto& r : entries) n += static_cast<long>(r.size());
        return n;
    }
};

/// Total stored entry count.
long sparsity(const SparseFeatureMatrix& f);

/// Stored entries divided by N * l_p * T.
double sparsity_ratio(const SparseFeatureMatrix& f, int l_p, int iterations);

/// Text format, bit-exact: header "N COLS NNZ", then one "row<TAB>col<TAB>value"
/// line per entry with values at 17 significant digits. Written atomically.
void save_sparse(const SparseFeatureMatrix& f, const std::string& path);

SparseFeatureMatrix load_sparse(const std::string& path);

Eigen::MatrixXd to_dense(const SparseFeatureMatrix& f);

}  // namespace rulls
