#include "rulls/sparse.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rulls/errors.hpp"

namespace rulls {

long sparsity(const SparseFeatureMatrix& f) { return f.nnz(); }

double sparsity_ratio(const SparseFeatureMatrix& f, int l_p, int iterations) {
    const double denom = static_cast<double>(f.rows) * l_p * iterations;
    if (denom <= 0) return 0.0;
    return static_cast<double>(f.nnz()) / denom;
}

void save_sparse(const SparseFeatureMatrix& f, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write file: " + tmp);
        out << f.rows << ' ' << f.cols << ' ' << f.nnz() << '\n';
        char buf[64];
        for (int i = 0; i < f.rows; ++i) {
            for (const auto& [col, val] : f.entries[i]) {
                std::snprintf(buf, sizeof(buf), "%.17g", val);
                out << i << '\t' << col << '\t' << buf << '\n';
            }
        }
        if (!out) throw DataError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename " + tmp + " to " + path);
}

SparseFeatureMatrix load_sparse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    SparseFeatureMatrix f;
    long nnz = 0;
    if (!(in >> f.rows >> f.cols >> nnz))
        throw DataError("malformed sparse matrix header in " + path);
    if (f.rows < 0 || f.cols < 0 || nnz < 0)
        throw DataError("negative dimension in sparse matrix header");
    f.entries.assign(f.rows, {});
    int prev_row = -1;
    long prev_col = -1;
    for (long e = 0; e < nnz; ++e) {
        int row;
        long col;
        double val;
        if (!(in >> row >> col >> val))
            throw DataError("truncated sparse matrix file: " + path);
        if (row < 0 || row >= f.rows || col < 0 || col >= f.cols)
            throw DataError("entry out of bounds in " + path);
        if (row < prev_row || (row == prev_row && col <= prev_col))
            throw DataError("entries out of order in " + path);
        prev_row = row;
        prev_col = col;
        f.entries[row].emplace_back(col, val);
    }
    return f;
}

Eigen::MatrixXd to_dense(const SparseFeatureMatrix& f) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f.rows, f.cols);
    for (int i = 0; i < f.rows; ++i)
        for (const auto& [col, val] : f.entries[i]) out(i, col) = val;
    return out;
}

}  // namespace rulls
