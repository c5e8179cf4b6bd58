#pragma once

#include <cstdint>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

/// Learned linear projection maximizing the stochastic leave-one-out
/// nearest-neighbor objective.
struct NcaModel {
    Matrix A; // p x m
    /// Initial objective followed by the objective after each accepted step;
    /// non-decreasing by construction.
    std::vector<double> objective_trace;
    bool converged = false;

    std::size_t input_dim() const { return A.cols(); }
    std::size_t output_dim() const { return A.rows(); }
};

enum class NcaInit { ScaledIdentity, SeededRandom };

struct NcaConfig {
    std::size_t p = 1;                       // target dimension
    std::size_t max_iters = 200;
    double initial_step = 1.0;
    double backtrack_factor = 0.5;           // step multiplier while searching, in (0, 1)
    double tolerance = 1e-6;                 // on relative objective improvement
    std::uint64_t seed = 0;
    NcaInit init = NcaInit::ScaledIdentity;
};

/// Stochastic neighbor matrix P with
///   P(i, j) = exp(-||A x_i - A x_j||^2) / sum_{k != i} exp(-||A x_i - A x_k||^2)
/// for j != i and P(i, i) = 0. Rows are computed with max-subtraction so
/// arbitrarily large squared distances cannot overflow. Requires n >= 2.
Matrix neighbor_probabilities(const Matrix& A, const Matrix& X);

/// (A x_i - A x_j)^T (A x_i - A x_j).
double projected_distance(const Matrix& A, const std::vector<double>& x_i,
                          const std::vector<double>& x_j);

/// f(A) = sum_i sum_{j in C_i} P(i, j) with C_i the same-label set of i.
double objective(const Matrix& A, const Matrix& X, const std::vector<int>& labels);

/// df/dA = 2 A sum_i ( p_i sum_k P_ik x_ik x_ik^T - sum_{j in C_i} P_ij x_ij x_ij^T ),
/// x_ij = x_i - x_j. Assembled as 2 A X^T M X with the pair weights folded
/// into a Laplacian-style n x n matrix M, which keeps the kernel O(n^2 m).
Matrix objective_gradient(const Matrix& A, const Matrix& X, const std::vector<int>& labels);

/// Gradient ascent with backtracking line search. Starting from A0 (see
/// NcaInit), each iteration computes the gradient and halves the step by
/// backtrack_factor until the objective strictly increases; if no trial step
/// improves it, the fit stops at the current point. Stops otherwise at
/// max_iters or when the relative improvement drops below tolerance. The
/// returned trace is non-decreasing and the fit is deterministic for a
/// fixed seed and config.
NcaModel fit_nca(const Matrix& X_train, const std::vector<int>& labels, const NcaConfig& config);

/// Row-wise projection A x. Output has model.output_dim() columns.
Matrix transform(const NcaModel& model, const Matrix& X);

namespace serial {
/// Plain loop-nest references for the parallel kernels above, including the
/// literal sum-of-outer-products gradient. Kept for tests and the kernel
/// benchmark.
Matrix neighbor_probabilities(const Matrix& A, const Matrix& X);
double objective(const Matrix& A, const Matrix& X, const std::vector<int>& labels);
Matrix objective_gradient(const Matrix& A, const Matrix& X, const std::vector<int>& labels);
} // namespace serial

} // namespace reducebench
