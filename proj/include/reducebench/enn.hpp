#pragma once

#include <cstddef>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

/// Extended nearest neighbor classifier. The decision statistic for class i is
///   T_i = (1 / (n_i * k)) * sum_{y in class i} sum_{r=1..k} I_r(y)
/// where I_r(y) is 1 iff y's r-th nearest neighbor in the set (excluding y,
/// ties by lower index) shares y's class. A query is assigned the candidate
/// label that maximizes the sum of the T_i recomputed over the set augmented
/// with the labeled query.
struct EnnModel {
    std::size_t k = 5;
    Matrix train_features;
    std::vector<int> train_labels;
    std::vector<std::size_t> class_counts;        // n_i
    std::vector<double> baseline_statistics;      // T_i over the training set

    // Cached neighbor structure for the incremental rule.
    std::vector<std::vector<std::size_t>> neighbor_lists; // k nearest per point
    std::vector<double> kth_sqdist;                       // squared distance to the k-th
    std::vector<std::size_t> same_class_hits;             // integer numerator of T_i per class
};

/// T_i for one class, built from scratch. Requires k in [1, n-1] and a
/// non-empty class.
double enn_class_statistic(const Matrix& features, const std::vector<int>& labels, std::size_t k,
                           int class_index);

EnnModel fit_enn(const Matrix& features, const std::vector<int>& labels, std::size_t k = 5);

/// Reference rule: for each candidate class rebuilds every class statistic
/// over the augmented set and takes the argmax of their sum (ties to the
/// lower class index).
int enn_predict_direct(const EnnModel& model, const std::vector<double>& z);

/// Same decision as enn_predict_direct, but only the neighbor relations the
/// query can change are touched: the query's own k neighbors plus the
/// training points whose k-th neighbor it displaces.
int enn_predict_incremental(const EnnModel& model, const std::vector<double>& z);

/// One enn_predict_incremental label per row of X.
std::vector<int> enn_predict_batch(const EnnModel& model, const Matrix& X);

namespace serial {
std::vector<int> enn_predict_batch(const EnnModel& model, const Matrix& X);
} // namespace serial

} // namespace reducebench
