#pragma once

#include <cstdint>
#include <vector>

#include "reducebench/errors.hpp"

namespace reducebench {

/// C x C count matrix, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::size_t class_count = 0;
    std::vector<std::uint64_t> counts; // row-major, class_count^2

    std::uint64_t& at(std::size_t true_class, std::size_t predicted) {
        return counts[true_class * class_count + predicted];
    }
    std::uint64_t at(std::size_t true_class, std::size_t predicted) const {
        return counts[true_class * class_count + predicted];
    }
    std::uint64_t total() const;
};

struct MetricsReport {
    double accuracy = 0.0;
    double f_measure = 0.0; // macro-averaged F1
    double g_mean = 0.0;    // geometric mean of per-class recalls
    std::vector<double> per_class_precision;
    std::vector<double> per_class_recall;
};

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels,
                          std::size_t class_count);

/// trace / total.
double accuracy(const ConfusionMatrix& cm);

/// Unweighted mean of per-class F1. Per class, precision = diag/colsum,
/// recall = diag/rowsum, F = 2pr/(p+r); any 0/0 gives 0.
double macro_f_measure(const ConfusionMatrix& cm);

/// Geometric mean of per-class recalls. Classes with no true samples are
/// excluded from the product; a single zero recall gives 0.
double g_mean(const ConfusionMatrix& cm);

/// All of the above in one pass.
MetricsReport evaluate_predictions(const ConfusionMatrix& cm);

} // namespace reducebench
