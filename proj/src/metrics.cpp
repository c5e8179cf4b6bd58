#include "reducebench/metrics.hpp"

#include <cmath>
#include <numeric>

namespace reducebench {

std::uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels,
                          std::size_t class_count) {
    if (true_labels.size() != predicted_labels.size())
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(true_labels.size()) + " true vs " +
                        std::to_string(predicted_labels.size()) + " predicted labels");
    ConfusionMatrix cm;
    cm.class_count = class_count;
    cm.counts.assign(class_count * class_count, 0);
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted_labels[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= class_count ||
            static_cast<std::size_t>(p) >= class_count)
            throw Error(ErrorCode::LabelOutOfRange,
                        "sample " + std::to_string(i) + ": true " + std::to_string(t) +
                            ", predicted " + std::to_string(p) + ", C = " + std::to_string(class_count));
        cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p))++;
    }
    return cm;
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.class_count == 0 || cm.total() == 0)
        throw Error(ErrorCode::EmptyMatrix, "confusion matrix holds no samples");
}

} // namespace

double accuracy(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    std::uint64_t trace = 0;
    for (std::size_t j = 0; j < cm.class_count; ++j) trace += cm.at(j, j);
    return static_cast<double>(trace) / static_cast<double>(cm.total());
}

double macro_f_measure(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    double sum = 0.0;
    for (std::size_t j = 0; j < cm.class_count; ++j) {
        std::uint64_t colsum = 0, rowsum = 0;
        for (std::size_t i = 0; i < cm.class_count; ++i) {
            colsum += cm.at(i, j);
            rowsum += cm.at(j, i);
        }
        // 2pr/(p+r) rewritten over the counts: one division keeps hand-
        // checkable ratios exact. tp = 0 covers every 0/0 -> 0 convention.
        const std::uint64_t tp2 = 2 * cm.at(j, j);
        const std::uint64_t denom = colsum + rowsum; // 2tp + fp + fn
        if (tp2 > 0) {
            sum += static_cast<double>(tp2) / static_cast<double>(denom);
        }
    }
    return sum / static_cast<double>(cm.class_count);
}

double g_mean(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    double product = 1.0;
    std::size_t represented = 0;
    for (std::size_t j = 0; j < cm.class_count; ++j) {
        std::uint64_t rowsum = 0;
        for (std::size_t i = 0; i < cm.class_count; ++i) rowsum += cm.at(j, i);
        if (rowsum == 0) continue; // class absent from the evaluated samples
        ++represented;
        const double recall = static_cast<double>(cm.at(j, j)) / static_cast<double>(rowsum);
        if (recall == 0.0) return 0.0;
        product *= recall;
    }
    if (represented == 0) return 0.0;
    if (represented == 1) return product;
    if (represented == 2) return std::sqrt(product);
    return std::pow(product, 1.0 / static_cast<double>(represented));
}

MetricsReport evaluate_predictions(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    MetricsReport r;
    r.accuracy = accuracy(cm);
    r.f_measure = macro_f_measure(cm);
    r.g_mean = g_mean(cm);
    r.per_class_precision.assign(cm.class_count, 0.0);
    r.per_class_recall.assign(cm.class_count, 0.0);
    for (std::size_t j = 0; j < cm.class_count; ++j) {
        std::uint64_t colsum = 0, rowsum = 0;
        for (std::size_t i = 0; i < cm.class_count; ++i) {
            colsum += cm.at(i, j);
            rowsum += cm.at(j, i);
        }
        const double diag = static_cast<double>(cm.at(j, j));
        r.per_class_precision[j] = colsum == 0 ? 0.0 : diag / static_cast<double>(colsum);
        r.per_class_recall[j] = rowsum == 0 ? 0.0 : diag / static_cast<double>(rowsum);
    }
    return r;
}

} // namespace reducebench
