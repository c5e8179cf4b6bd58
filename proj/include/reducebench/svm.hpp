#pragma once

#include <cstddef>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

/// Soft-margin linear SVM in dual form: maximize sum(alpha) - 1/2 sum_ij
/// alpha_i alpha_j l_i l_j (x_i . x_j) subject to 0 <= alpha <= C and
/// sum alpha_i l_i = 0. Solved by pairwise coordinate steps on the maximal
/// KKT-violating pair.
struct SvmBinaryModel {
    Matrix support_vectors;
    std::vector<double> alphas;        // strictly positive, <= C
    std::vector<double> support_labels; // +1 or -1
    double bias = 0.0;
    double C = 1.0;
    bool converged = true; // false when the pass limit was hit first

    std::size_t input_dim() const { return support_vectors.cols(); }
};

struct SvmMulticlassModel {
    struct PairwiseModel {
        int first = 0;  // positive side of the decision
        int second = 0; // negative side
        SvmBinaryModel model;
    };
    std::size_t class_count = 0;
    std::vector<PairwiseModel> pairs; // all unordered pairs, first < second
};

/// labels must be +1 or -1 with both present. Optimizes until the duality-gap
/// bound m(alpha) - M(alpha) drops below tol or max_iters pair updates run
/// out (converged = false on the returned model).
SvmBinaryModel svm_train_binary(const Matrix& features, const std::vector<int>& labels, double C,
                                double tol = 1e-3, std::size_t max_iters = 200000);

/// sum_j alpha_j l_j (x_j . z) + bias.
double svm_decision(const SvmBinaryModel& model, const std::vector<double>& z);

/// One binary model per class pair over the rows of each pair's classes;
/// class pair (a, b) with a < b maps a to +1 and b to -1.
SvmMulticlassModel svm_train_multiclass(const Matrix& features, const std::vector<int>& labels,
                                        double C, double tol = 1e-3);

/// One-vs-one vote. Positive or zero decision votes for the pair's first
/// class. Vote ties go to the class with the larger sum of winning |decision|
/// values, then to the lower class index.
int svm_predict_multiclass(const SvmMulticlassModel& model, const std::vector<double>& z);

/// One svm_predict_multiclass label per row of X.
std::vector<int> svm_predict_batch(const SvmMulticlassModel& model, const Matrix& X);

namespace serial {
std::vector<int> svm_predict_batch(const SvmMulticlassModel& model, const Matrix& X);
} // namespace serial

} // namespace reducebench
