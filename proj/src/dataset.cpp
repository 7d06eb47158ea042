#include "rulls/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "rulls/errors.hpp"
#include "rulls/rng.hpp"

namespace rulls {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '"') throw DataError("quoted CSV fields are not supported");
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

int Dataset::num_classes() const {
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    return c;
}

Dataset load_csv(const std::string& path, std::optional<int> label_column,
                 bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (first && has_header) {
            header = fields;
            first = false;
            continue;
        }
        first = false;
        if (!rows.empty() && fields.size() != rows.front().size())
            throw DataError("inconsistent column count at data row " +
                            std::to_string(rows.size() + 1));
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw DataError("no data rows in " + path);

    const int total_cols = static_cast<int>(rows.front().size());
    int label_col = -1;
    if (label_column) {
        label_col = *label_column;
        if (label_col < 0) label_col += total_cols;  // -1 addresses the last column
        if (label_col < 0 || label_col >= total_cols)
            throw ConfigError("label column out of range");
    }

    const int n = static_cast<int>(rows.size());
    const int m = total_cols - (label_col >= 0 ? 1 : 0);
    if (m < 1) throw DataError("no feature columns left after label removal");

    Dataset d;
    d.values.resize(n, m);
    if (!header.empty()) {
        for (int c = 0; c < total_cols; ++c)
            if (c != label_col) d.feature_names.push_back(header[c]);
    }

    std::vector<std::string> label_tokens;
    if (label_col >= 0) label_tokens.reserve(n);

    // First pass: parse, remember missing cells.
    std::vector<std::pair<int, int>> missing;
    for (int i = 0; i < n; ++i) {
        int out_c = 0;
        for (int c = 0; c < total_cols; ++c) {
            if (c == label_col) {
                label_tokens.push_back(rows[i][c]);
                continue;
            }
            const std::string& cell = rows[i][c];
            if (cell.empty()) {
                d.values(i, out_c) = std::numeric_limits<double>::quiet_NaN();
                missing.emplace_back(i, out_c);
            } else {
                double v;
                if (!parse_double(cell, v))
                    throw DataError("non-numeric cell '" + cell + "' at row " +
                                    std::to_string(i) + ", column " + std::to_string(c));
                if (!std::isfinite(v))
                    throw DataError("non-finite value at row " + std::to_string(i));
                d.values(i, out_c) = v;
            }
            ++out_c;
        }
    }

    // Column-mean imputation.
    if (!missing.empty()) {
        Eigen::VectorXd mean(m);
        for (int c = 0; c < m; ++c) {
            double sum = 0;
            int cnt = 0;
            for (int i = 0; i < n; ++i) {
                double v = d.values(i, c);
                if (!std::isnan(v)) {
                    sum += v;
                    ++cnt;
                }
            }
            if (cnt == 0)
                throw DataError("column " + std::to_string(c) +
                                " is entirely missing, no mean defined");
            mean(c) = sum / cnt;
        }
        for (auto [i, c] : missing) d.values(i, c) = mean(c);
    }

    if (label_col >= 0) {
        // Integer tokens are kept as-is; anything else is mapped in
        // first-appearance order.
        bool all_int = true;
        std::vector<long> as_int(n);
        for (int i = 0; i < n; ++i) {
            const std::string& t = label_tokens[i];
            long v = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size() || v < 0) {
                all_int = false;
                break;
            }
            as_int[i] = v;
        }
        d.labels.resize(n);
        if (all_int) {
            for (int i = 0; i < n; ++i) d.labels[i] = static_cast<int>(as_int[i]);
        } else {
            std::map<std::string, int> ids;
            std::vector<std::string> order;
            for (int i = 0; i < n; ++i) {
                auto it = ids.find(label_tokens[i]);
                if (it == ids.end()) {
                    int id = static_cast<int>(ids.size());
                    it = ids.emplace(label_tokens[i], id).first;
                }
                d.labels[i] = it->second;
            }
        }
    }
    return d;
}

Dataset normalize_global(const Dataset& d) {
    Dataset out = d;
    const int n = d.rows();
    for (int c = 0; c < d.cols(); ++c) {
        double mean = d.values.col(c).mean();
        double var = (d.values.col(c).array() - mean).square().sum() / n;
        double sd = std::sqrt(var);
        if (sd > 0)
            out.values.col(c) = (d.values.col(c).array() - mean) / sd;
        else
            out.values.col(c).setZero();
    }
    return out;
}

namespace {

std::vector<int> sample_without_replacement(int n, int k, std::mt19937_64& eng) {
    // Partial Fisher-Yates over an index array.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> dist(i, n - 1);
        std::swap(idx[i], idx[dist(eng)]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace

Dataset add_column_noise(const Dataset& d, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("noise fraction must be in (0, 1]");
    const int m = d.cols();
    const int count = static_cast<int>(std::ceil(fraction * m));
    auto eng = make_engine(derive_seed(seed, streams::kColumnNoise));
    auto cols = sample_without_replacement(m, count, eng);
    std::sort(cols.begin(), cols.end());

    Dataset out = d;
    for (int c : cols) {
        double lo = d.values.col(c).minCoeff();
        double hi = d.values.col(c).maxCoeff();
        std::uniform_real_distribution<double> dist(lo, hi);
        for (int i = 0; i < d.rows(); ++i) out.values(i, c) = dist(eng);
    }
    return out;
}

Dataset add_row_noise(const Dataset& d, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("noise fraction must be in (0, 1]");
    const int n = d.rows();
    const int count = static_cast<int>(std::ceil(fraction * n));
    auto eng = make_engine(derive_seed(seed, streams::kRowNoise));
    auto rows = sample_without_replacement(n, count, eng);
    std::sort(rows.begin(), rows.end());

    Eigen::VectorXd lo = d.values.colwise().minCoeff();
    Eigen::VectorXd hi = d.values.colwise().maxCoeff();
    Dataset out = d;
    for (int i : rows) {
        for (int c = 0; c < d.cols(); ++c) {
            std::uniform_real_distribution<double> dist(lo(c), hi(c));
            out.values(i, c) = dist(eng);
        }
    }
    return out;
}

SplitIndices split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw ConfigError("train fraction must be in (0, 1)");
    const int n = d.rows();
    if (n < 2) throw ConfigError("need at least 2 rows to split");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto eng = make_engine(derive_seed(seed, streams::kSplit));
    for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> dist(0, i);
        std::swap(idx[i], idx[dist(eng)]);
    }
    const int ntr = static_cast<int>(std::floor(train_fraction * n));
    if (ntr == 0 || ntr == n)
        throw ConfigError("degenerate split: one side would be empty");
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + ntr);
    s.test.assign(idx.begin() + ntr, idx.end());
    return s;
}

}  // namespace rulls
