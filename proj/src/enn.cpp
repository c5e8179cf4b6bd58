#include "reducebench/enn.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "reducebench/errors.hpp"
#include "reducebench/knn.hpp"
#include "reducebench/parallel.hpp"

namespace reducebench {

namespace {

void check_enn_inputs(const Matrix& features, const std::vector<int>& labels, std::size_t k) {
    if (labels.size() != features.rows()) {
        throw Error(ErrorCode::LengthMismatch, "labels length does not match feature rows");
    }
    if (features.rows() < 2) {
        throw Error(ErrorCode::DegenerateInput, "need at least 2 samples");
    }
    if (k < 1 || k >= features.rows()) {
        throw Error(ErrorCode::KTooLarge,
                    "k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(features.rows() - 1) + "]");
    }
    for (int label : labels) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class index");
    }
}

std::vector<std::size_t> count_classes(const std::vector<int>& labels) {
    int max_label = 0;
    for (int label : labels) max_label = std::max(max_label, label);
    std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int label : labels) counts[static_cast<std::size_t>(label)] += 1;
    return counts;
}

// Number of y's k nearest neighbors (excluding y, ties by lower index) that
// share y's label.
std::size_t same_class_neighbor_hits(const Matrix& features, const std::vector<int>& labels,
                                     std::size_t k, std::size_t y) {
    const std::size_t n = features.rows();
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == y) continue;
        order.emplace_back(squared_distance(features.row(y), features.row(j), features.cols()), j);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r) {
        if (labels[order[r].second] == labels[y]) ++hits;
    }
    return hits;
}

// Both decision rules score candidates through this one expression so their
// floating-point results are identical whenever their integer hit counts are.
double score_from_hits(const std::vector<std::size_t>& hits,
                       const std::vector<std::size_t>& class_counts, std::size_t candidate,
                       std::size_t k) {
    double score = 0.0;
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
        const std::size_t n_c = class_counts[c] + (c == candidate ? 1 : 0);
        score += static_cast<double>(hits[c]) / static_cast<double>(n_c * k);
    }
    return score;
}

void check_query(const EnnModel& model, const std::vector<double>& z) {
    if (z.size() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query length does not match training width");
    }
}

} // namespace

double enn_class_statistic(const Matrix& features, const std::vector<int>& labels, std::size_t k,
                           int class_index) {
    check_enn_inputs(features, labels, k);
    const std::vector<std::size_t> counts = count_classes(labels);
    if (class_index < 0 || static_cast<std::size_t>(class_index) >= counts.size() ||
        counts[static_cast<std::size_t>(class_index)] == 0) {
        throw Error(ErrorCode::EmptyClass,
                    "class " + std::to_string(class_index) + " has no samples");
    }
    std::size_t hits = 0;
    for (std::size_t y = 0; y < features.rows(); ++y) {
        if (labels[y] != class_index) continue;
        hits += same_class_neighbor_hits(features, labels, k, y);
    }
    return static_cast<double>(hits) /
           static_cast<double>(counts[static_cast<std::size_t>(class_index)] * k);
}

EnnModel fit_enn(const Matrix& features, const std::vector<int>& labels, std::size_t k) {
    check_enn_inputs(features, labels, k);
    EnnModel model;
    model.k = k;
    model.train_features = features;
    model.train_labels = labels;
    model.class_counts = count_classes(labels);
    for (std::size_t c = 0; c < model.class_counts.size(); ++c) {
        if (model.class_counts[c] == 0) {
            throw Error(ErrorCode::EmptyClass, "class " + std::to_string(c) + " has no samples");
        }
    }

    const std::size_t n = features.rows();
    model.neighbor_lists.resize(n);
    model.kth_sqdist.assign(n, 0.0);
    std::vector<std::size_t> per_point_hits(n, 0);
    const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(n * n))
    for (long long yi = 0; yi < rows; ++yi) {
        const std::size_t y = static_cast<std::size_t>(yi);
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == y) continue;
            order.emplace_back(
                squared_distance(features.row(y), features.row(j), features.cols()), j);
        }
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                          order.end());
        std::vector<std::size_t>& list = model.neighbor_lists[y];
        list.resize(k);
        std::size_t hits = 0;
        for (std::size_t r = 0; r < k; ++r) {
            list[r] = order[r].second;
            if (labels[order[r].second] == labels[y]) ++hits;
        }
        model.kth_sqdist[y] = order[k - 1].first;
        per_point_hits[y] = hits;
    }

    model.same_class_hits.assign(model.class_counts.size(), 0);
    for (std::size_t y = 0; y < n; ++y) {
        model.same_class_hits[static_cast<std::size_t>(labels[y])] += per_point_hits[y];
    }
    model.baseline_statistics.resize(model.class_counts.size());
    for (std::size_t c = 0; c < model.class_counts.size(); ++c) {
        model.baseline_statistics[c] = static_cast<double>(model.same_class_hits[c]) /
                                       static_cast<double>(model.class_counts[c] * k);
    }
    return model;
}

int enn_predict_direct(const EnnModel& model, const std::vector<double>& z) {
    check_query(model, z);
    const Matrix& train = model.train_features;
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    const std::size_t C = model.class_counts.size();
    const std::size_t k = model.k;

    int best = 0;
    double best_score = -1.0;
    for (std::size_t j = 0; j < C; ++j) {
        std::vector<std::size_t> hits(C, 0);
        // Training points, each scanning the augmented set without itself.
        // The query carries index n so distance ties favor training points.
        for (std::size_t y = 0; y < n; ++y) {
            std::vector<std::pair<double, std::size_t>> order;
            order.reserve(n);
            for (std::size_t t = 0; t < n; ++t) {
                if (t == y) continue;
                order.emplace_back(squared_distance(train.row(y), train.row(t), d), t);
            }
            order.emplace_back(squared_distance(train.row(y), z.data(), d), n);
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                              order.end());
            const int y_label = model.train_labels[y];
            std::size_t y_hits = 0;
            for (std::size_t r = 0; r < k; ++r) {
                const std::size_t t = order[r].second;
                const int t_label = t == n ? static_cast<int>(j) : model.train_labels[t];
                if (t_label == y_label) ++y_hits;
            }
            hits[static_cast<std::size_t>(y_label)] += y_hits;
        }
        // The query's own neighborhood.
        const std::vector<std::size_t> own = nearest_neighbors(train, z.data(), k);
        for (std::size_t t : own) {
            if (model.train_labels[t] == static_cast<int>(j)) ++hits[j];
        }
        const double score = score_from_hits(hits, model.class_counts, j, k);
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(j);
        }
    }
    return best;
}

int enn_predict_incremental(const EnnModel& model, const std::vector<double>& z) {
    check_query(model, z);
    const Matrix& train = model.train_features;
    const std::size_t n = train.rows();
    const std::size_t C = model.class_counts.size();
    const std::size_t k = model.k;

    std::vector<double> d2(n);
    for (std::size_t t = 0; t < n; ++t) {
        d2[t] = squared_distance(train.row(t), z.data(), train.cols());
    }

    // The query's own k nearest, ordered by (distance, index).
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t t = 0; t < n; ++t) order[t] = {d2[t], t};
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    std::vector<std::size_t> own_counts(C, 0);
    for (std::size_t r = 0; r < k; ++r) {
        own_counts[static_cast<std::size_t>(model.train_labels[order[r].second])] += 1;
    }

    // Training points whose k-th neighbor the query displaces. The query has
    // the largest index, so an exact distance tie keeps the incumbent.
    std::vector<std::size_t> displaced(C, 0); // per class of the displaced point
    std::vector<std::size_t> loss(C, 0);      // displaced points losing a same-class hit
    for (std::size_t t = 0; t < n; ++t) {
        if (d2[t] >= model.kth_sqdist[t]) continue;
        const std::size_t c = static_cast<std::size_t>(model.train_labels[t]);
        displaced[c] += 1;
        const std::size_t dropped = model.neighbor_lists[t][k - 1];
        if (model.train_labels[dropped] == model.train_labels[t]) loss[c] += 1;
    }

    int best = 0;
    double best_score = -1.0;
    std::vector<std::size_t> hits(C, 0);
    for (std::size_t j = 0; j < C; ++j) {
        for (std::size_t c = 0; c < C; ++c) {
            hits[c] = model.same_class_hits[c] - loss[c];
            if (c == j) hits[c] += displaced[c] + own_counts[c];
        }
        const double score = score_from_hits(hits, model.class_counts, j, k);
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(j);
        }
    }
    return best;
}

std::vector<int> enn_predict_batch(const EnnModel& model, const Matrix& X) {
    if (X.cols() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query width does not match training width");
    }
    std::vector<int> out(X.rows(), 0);
    const long long rows = static_cast<long long>(X.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(X.rows() * model.train_features.rows()))
    for (long long i = 0; i < rows; ++i) {
        out[static_cast<std::size_t>(i)] =
            enn_predict_incremental(model, X.row_copy(static_cast<std::size_t>(i)));
    }
    return out;
}

namespace serial {

std::vector<int> enn_predict_batch(const EnnModel& model, const Matrix& X) {
    if (X.cols() != model.train_features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query width does not match training width");
    }
    std::vector<int> out(X.rows(), 0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        out[i] = enn_predict_incremental(model, X.row_copy(i));
    }
    return out;
}

} // namespace serial

} // namespace reducebench
