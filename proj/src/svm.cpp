#include "reducebench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reducebench/errors.hpp"
#include "reducebench/parallel.hpp"

namespace reducebench {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace

SvmBinaryModel svm_train_binary(const Matrix& features, const std::vector<int>& labels, double C,
                                double tol, std::size_t max_iters) {
    const std::size_t n = features.rows();
    if (labels.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "labels length does not match feature rows");
    }
    if (n < 2) {
        throw Error(ErrorCode::DegenerateInput, "need at least 2 samples");
    }
    if (C <= 0.0 || tol <= 0.0) {
        throw Error(ErrorCode::InvalidConfig, "C and tol must be positive");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int label : labels) {
        if (label == 1) {
            has_pos = true;
        } else if (label == -1) {
            has_neg = true;
        } else {
            throw Error(ErrorCode::LabelOutOfRange, "binary labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw Error(ErrorCode::SingleClass, "both labels must be present");
    }

    const Matrix K = matmul_nt(features, features);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(labels[i]);

    // G_i is the dual gradient y_i * u_i - 1 with u_i = sum_j alpha_j y_j K_ij;
    // alpha = 0 gives G = -1 everywhere.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> G(n, -1.0);

    bool converged = false;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Maximal violating pair: i maximizes -y G over I_up, j minimizes it
        // over I_low. The gap bounds the KKT violation.
        std::size_t i = n;
        std::size_t j = n;
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * G[t];
            const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
            const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
            if (in_up && v > up_best) {
                up_best = v;
                i = t;
            }
            if (in_low && v < low_best) {
                low_best = v;
                j = t;
            }
        }
        if (i == n || j == n || up_best - low_best <= tol) {
            converged = true;
            break;
        }

        // Step t along alpha_i += y_i t, alpha_j -= y_j t keeps the equality
        // constraint; the unconstrained optimum is the violation over the
        // curvature, clipped to the box.
        double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
        if (eta <= 0.0) eta = 1e-12;
        double step = (up_best - low_best) / eta;
        const double room_i = y[i] > 0 ? C - alpha[i] : alpha[i];
        const double room_j = y[j] > 0 ? alpha[j] : C - alpha[j];
        step = std::min(step, std::min(room_i, room_j));
        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;
        for (std::size_t t = 0; t < n; ++t) {
            G[t] += y[t] * step * (K(t, i) - K(t, j));
        }
    }

    // Bias: average y_i - u_i over free vectors; otherwise the midpoint of
    // the interval every bound vector leaves feasible.
    const double band = 1e-9 * C;
    double bias_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double r = -y[t] * G[t]; // equals y_t - u_t
        const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
        const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
        if (alpha[t] > band && alpha[t] < C - band) {
            bias_sum += r;
            ++free_count;
        }
        if (in_up) lo = std::max(lo, r);
        if (in_low) hi = std::min(hi, r);
    }
    SvmBinaryModel model;
    model.C = C;
    model.converged = converged;
    model.bias = free_count > 0 ? bias_sum / static_cast<double>(free_count) : 0.5 * (lo + hi);

    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t < n; ++t) {
        alpha[t] = std::clamp(alpha[t], 0.0, C);
        if (alpha[t] > 0.0) keep.push_back(t);
    }
    model.support_vectors = features.take_rows(keep);
    model.alphas.reserve(keep.size());
    model.support_labels.reserve(keep.size());
    for (std::size_t t : keep) {
        model.alphas.push_back(alpha[t]);
        model.support_labels.push_back(y[t]);
    }
    return model;
}

double svm_decision(const SvmBinaryModel& model, const std::vector<double>& z) {
    if (model.alphas.empty()) {
        throw Error(ErrorCode::ModelUntrained, "model has no support vectors");
    }
    if (z.size() != model.support_vectors.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "query length does not match training width");
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < model.alphas.size(); ++t) {
        acc += model.alphas[t] * model.support_labels[t] *
               dot(model.support_vectors.row(t), z.data(), z.size());
    }
    return acc + model.bias;
}

SvmMulticlassModel svm_train_multiclass(const Matrix& features, const std::vector<int>& labels,
                                        double C, double tol) {
    if (labels.size() != features.rows()) {
        throw Error(ErrorCode::LengthMismatch, "labels length does not match feature rows");
    }
    int max_label = -1;
    for (int label : labels) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class index");
        max_label = std::max(max_label, label);
    }
    const std::size_t class_count = static_cast<std::size_t>(max_label) + 1;
    if (class_count < 2) {
        throw Error(ErrorCode::SingleClass, "need at least 2 classes");
    }

    SvmMulticlassModel model;
    model.class_count = class_count;
    for (int a = 0; a < static_cast<int>(class_count); ++a) {
        for (int b = a + 1; b < static_cast<int>(class_count); ++b) {
            model.pairs.push_back({a, b, SvmBinaryModel{}});
        }
    }
    // Pairwise problems share only read-only data, so any training order and
    // degree of parallelism yields the same models.
    const long long pair_count = static_cast<long long>(model.pairs.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap()) if (pair_count > 1)
    for (long long p = 0; p < pair_count; ++p) {
        SvmMulticlassModel::PairwiseModel& pair = model.pairs[static_cast<std::size_t>(p)];
        std::vector<std::size_t> rows;
        std::vector<int> pm1;
        for (std::size_t t = 0; t < labels.size(); ++t) {
            if (labels[t] == pair.first || labels[t] == pair.second) {
                rows.push_back(t);
                pm1.push_back(labels[t] == pair.first ? 1 : -1);
            }
        }
        pair.model = svm_train_binary(features.take_rows(rows), pm1, C, tol);
    }
    return model;
}

int svm_predict_multiclass(const SvmMulticlassModel& model, const std::vector<double>& z) {
    if (model.pairs.empty()) {
        throw Error(ErrorCode::ModelUntrained, "multiclass model has no pairwise models");
    }
    std::vector<std::size_t> votes(model.class_count, 0);
    std::vector<double> strength(model.class_count, 0.0);
    for (const SvmMulticlassModel::PairwiseModel& pair : model.pairs) {
        const double d = svm_decision(pair.model, z);
        const int winner = d >= 0.0 ? pair.first : pair.second;
        votes[static_cast<std::size_t>(winner)] += 1;
        strength[static_cast<std::size_t>(winner)] += std::fabs(d);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < model.class_count; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && strength[c] > strength[best])) {
            best = c;
        }
    }
    return static_cast<int>(best);
}

std::vector<int> svm_predict_batch(const SvmMulticlassModel& model, const Matrix& X) {
    std::vector<int> out(X.rows(), 0);
    const long long rows = static_cast<long long>(X.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(X.rows() * model.pairs.size() * 64))
    for (long long i = 0; i < rows; ++i) {
        out[static_cast<std::size_t>(i)] =
            svm_predict_multiclass(model, X.row_copy(static_cast<std::size_t>(i)));
    }
    return out;
}

namespace serial {

std::vector<int> svm_predict_batch(const SvmMulticlassModel& model, const Matrix& X) {
    std::vector<int> out(X.rows(), 0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        out[i] = svm_predict_multiclass(model, X.row_copy(i));
    }
    return out;
}

} // namespace serial

} // namespace reducebench
