#pragma once

#include <cstddef>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

struct KnnModel {
    std::size_t k = 5;
    Matrix train_features;
    std::vector<int> train_labels;
    std::size_t class_count = 0;
};

struct KnnPrediction {
    int label = 0;
    /// Entry j is the fraction of the k nearest neighbors labeled j, so each
    /// entry is a multiple of 1/k and the vector sums to 1.
    std::vector<double> probabilities;
};

/// Stores the training set. Requires 1 <= k <= sample count.
KnnModel fit_knn(const Matrix& features, const std::vector<int>& labels, std::size_t k = 5);

/// Majority vote among the k nearest training points by Euclidean distance.
/// Distance ties prefer the lower training index; probability ties prefer the
/// lower class index.
KnnPrediction knn_predict(const KnnModel& model, const std::vector<double>& x);

/// One knn_predict label per row of X.
std::vector<int> knn_predict_batch(const KnnModel& model, const Matrix& X);

namespace serial {
std::vector<int> knn_predict_batch(const KnnModel& model, const Matrix& X);
} // namespace serial

/// Indices of the k nearest rows to x, ordered by (squared distance, index)
/// ascending. Shared by the neighbor-based classifiers.
std::vector<std::size_t> nearest_neighbors(const Matrix& train, const double* x, std::size_t k);

} // namespace reducebench
