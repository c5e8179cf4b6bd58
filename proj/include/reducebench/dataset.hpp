#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

/// Labeled feature matrix. Labels are dense class indices in [0, C) in order
/// of first appearance in the source; class_names maps them back.
struct Dataset {
    std::string name;
    Matrix features;                      // n x d
    std::vector<int> labels;              // n, values in [0, C)
    std::vector<std::string> class_names; // C
    std::size_t d_original = 0;

    // where the rows came from
    std::string source_path;
    std::vector<std::size_t> dropped_rows; // 1-based line numbers rejected for missing values

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols(); }
    std::size_t class_count() const { return class_names.size(); }

    /// Per-class sample counts, indexed by class.
    std::vector<std::size_t> class_counts() const;

    /// Original label strings for the stored indices.
    std::vector<std::string> decode_labels() const;
};

struct CsvSchema {
    /// Label column by 0-based index; -1 means the last column.
    /// Ignored when label_column_name is non-empty (requires a header row).
    int label_column = -1;
    std::string label_column_name;
    bool has_header = false;
};

/// Parse a comma-separated UTF-8 file into a Dataset.
///
/// Feature cells must parse as finite numbers. Rows with missing values
/// (empty cell or "?") are dropped and recorded in Dataset::dropped_rows;
/// rows with the wrong field count raise MalformedRow. Labels may be any
/// non-empty string and are encoded in order of first appearance.
Dataset load_csv(const std::string& path, const CsvSchema& schema, const std::string& name = "");

/// Min-max scaling parameters, fit on training rows only.
struct ScalerParams {
    std::vector<double> min;   // per feature
    std::vector<double> range; // per feature, max - min (0 marks a constant feature)
};

ScalerParams fit_scaler(const Matrix& train_features);

/// (x - min) / range per column, clamped to [0, 1]. Zero-range columns map to 0.5.
Matrix apply_scaler(const ScalerParams& params, const Matrix& features);

struct SplitSpec {
    double train_fraction = 0.9;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Deterministic seeded holdout split; both index lists come back sorted.
///
/// Stratified mode walks classes in ascending index order, shuffles each
/// class's sample indices with Rng::shuffle (one Rng seeded with spec.seed,
/// shared across classes), and takes the first
/// clamp(round(count * (1 - train_fraction)), 1, count - 1) of them as test
/// rows. Unstratified mode shuffles all indices once and applies the same
/// count rule to the whole dataset.
SplitIndices stratified_split(const Dataset& dataset, const SplitSpec& spec);

} // namespace reducebench
