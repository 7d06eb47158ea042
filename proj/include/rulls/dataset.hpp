#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rulls {

/// Dense numeric table with optional integer labels.
struct Dataset {
    Eigen::MatrixXd values;             // N x m
    std::vector<int> labels;            // empty when unlabeled, else length N
    std::vector<std::string> feature_names;  // empty or length m

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    bool has_labels() const { return !labels.empty(); }
    int num_classes() const;
};

struct SplitIndices {
    std::vector<int> train;
    std::vector<int> test;
};

/// Load a comma-separated file. Empty fields are treated as missing and
/// imputed with the column mean. If label_column is given, that column is
/// removed from the values and stored as integer labels; string labels are
/// mapped to dense integers in first-appearance order.
Dataset load_csv(const std::string& path, std::optional<int> label_column,
                 bool has_header);

/// Z-score every column by its mean and standard deviation. Columns with
/// zero standard deviation map to all-zeros.
Dataset normalize_global(const Dataset& d);

/// Replace ceil(fraction*m) randomly chosen columns with i.i.d. uniform draws
/// over each column's original [min, max]. Other entries are untouched.
Dataset add_column_noise(const Dataset& d, double fraction, std::uint64_t seed);

/// Row-wise counterpart of add_column_noise: ceil(fraction*N) rows are
/// replaced, entry ranges taken per column.
Dataset add_row_noise(const Dataset& d, double fraction, std::uint64_t seed);

/// Seeded shuffle; the first floor(train_fraction*N) indices form the train
/// side, the remainder the test side.
SplitIndices split(const Dataset& d, double train_fraction, std::uint64_t seed);

}  // namespace rulls
