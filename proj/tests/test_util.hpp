#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rulls/dataset.hpp"

namespace testutil {

inline rulls::Dataset make_dataset(const Eigen::MatrixXd& values,
                                   std::vector<int> labels = {}) {
    rulls::Dataset d;
    d.values = values;
    d.labels = std::move(labels);
    return d;
}

inline Eigen::MatrixXd random_matrix(int n, int m, unsigned seed,
                                     double lo = -1.0, double hi = 1.0) {
    std::mt19937 eng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::MatrixXd out(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = dist(eng);
    return out;
}

/// Random orthogonal matrix via QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(int m, unsigned seed) {
    std::mt19937 eng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = gauss(eng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

class TempFile {
public:
    explicit TempFile(const std::string& name)
        : path_(std::string("/tmp/rulls_test_") + name + "_" +
                std::to_string(counter_++)) {}
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

    void write(const std::string& content) const {
        std::ofstream out(path_);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path_, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    }

private:
    static inline int counter_ = 0;
    std::string path_;
};

inline std::string data_path(const std::string& name) {
    return std::string(RULLS_TEST_DATA_DIR) + "/" + name;
}

}  // namespace testutil
