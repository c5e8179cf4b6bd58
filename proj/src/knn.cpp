#include "reducebench/knn.hpp"

#include <algorithm>
#include <utility>

#include "reducebench/errors.hpp"
#include "reducebench/parallel.hpp"

namespace reducebench {

std::vector<std::size_t> nearest_neighbors(const Matrix& train, const double* x, std::size_t k) {
    const std::size_t n = train.rows();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = {squared_distance(train.row(i), x, train.cols()), i};
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    std::vector<std::size_t> idx(k);
    for (std::size_t r = 0; r < k; ++r) idx[r] = order[r].second;
    return idx;
}

KnnModel fit_knn(const Matrix& features, const std::vector<int>& labels, std::size_t k) {
    if (labels.size() != features.rows()) {
        throw Error(ErrorCode::LengthMismatch, "labels length does not match feature rows");
    }
    if (features.rows() == 0) {
        throw Error(ErrorCode::EmptyDataset, "cannot fit on an empty training set");
    }
    if (k < 1 || k > features.rows()) {
        throw Error(ErrorCode::KTooLarge,
                    "k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(features.rows()) + "]");
    }
    int max_label = 0;
    for (int label : labels) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class index");
        max_label = std::max(max_label, label);
    }
    KnnModel model;
    model.k = k;
    model.train_features = features;
    model.train_labels = labels;
    model.class_count = static_cast<std::size_t>(max_label) + 1;
    return model;
}

KnnPrediction knn_predict(const KnnModel& model, const std::vector<double>& x) {
    if (x.size() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query length does not match training width");
    }
    const std::vector<std::size_t> nn = nearest_neighbors(model.train_features, x.data(), model.k);
    KnnPrediction out;
    out.probabilities.assign(model.class_count, 0.0);
    std::vector<std::size_t> votes(model.class_count, 0);
    for (std::size_t idx : nn) votes[static_cast<std::size_t>(model.train_labels[idx])] += 1;
    std::size_t best = 0;
    for (std::size_t c = 0; c < model.class_count; ++c) {
        out.probabilities[c] =
            static_cast<double>(votes[c]) / static_cast<double>(model.k);
        if (votes[c] > votes[best]) best = c;
    }
    out.label = static_cast<int>(best);
    return out;
}

std::vector<int> knn_predict_batch(const KnnModel& model, const Matrix& X) {
    if (X.cols() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query width does not match training width");
    }
    std::vector<int> out(X.rows(), 0);
    const long long rows = static_cast<long long>(X.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(X.rows() * model.train_features.rows()))
    for (long long i = 0; i < rows; ++i) {
        out[static_cast<std::size_t>(i)] =
            knn_predict(model, X.row_copy(static_cast<std::size_t>(i))).label;
    }
    return out;
}

namespace serial {

std::vector<int> knn_predict_batch(const KnnModel& model, const Matrix& X) {
    if (X.cols() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query width does not match training width");
    }
    std::vector<int> out(X.rows(), 0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        out[i] = knn_predict(model, X.row_copy(i)).label;
    }
    return out;
}

} // namespace serial

} // namespace reducebench
