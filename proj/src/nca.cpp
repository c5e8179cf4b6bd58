#include "reducebench/nca.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>

#include "reducebench/errors.hpp"
#include "reducebench/parallel.hpp"
#include "reducebench/rng.hpp"

namespace reducebench {

namespace {

void check_projection_shapes(const Matrix& A, const Matrix& X) {
    if (A.rows() == 0 || A.cols() == 0 || X.rows() == 0) {
        throw Error(ErrorCode::EmptyMatrix, "projection requires non-empty A and X");
    }
    if (X.cols() != A.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "X has " + std::to_string(X.cols()) + " columns but A expects " +
                        std::to_string(A.cols()));
    }
}

void check_labels(const Matrix& X, const std::vector<int>& labels) {
    if (labels.size() != X.rows()) {
        throw Error(ErrorCode::LengthMismatch,
                    "labels length " + std::to_string(labels.size()) + " != row count " +
                        std::to_string(X.rows()));
    }
}

// Fills one row of P from the corresponding row of the projected squared
// distance matrix. Shared by the serial and parallel variants so both produce
// identical floating-point results.
void softmax_row(const Matrix& dist, std::size_t i, Matrix& P) {
    const std::size_t n = dist.rows();
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i && dist(i, j) < mn) mn = dist(i, j);
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double e = std::exp(mn - dist(i, j));
        P(i, j) = e;
        denom += e;
    }
    P(i, i) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) P(i, j) /= denom;
    }
}

// Probability that point i picks a same-label neighbor.
std::vector<double> correct_pick_probabilities(const Matrix& P, const std::vector<int>& labels) {
    const std::size_t n = P.rows();
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && labels[j] == labels[i]) s += P(i, j);
        }
        p[i] = s;
    }
    return p;
}

double objective_from(const std::vector<double>& per_point) {
    double f = 0.0;
    for (double v : per_point) f += v;
    return f;
}

// df/dA = 2 A X^T M X where M = diag(r) + diag(c) - W - W^T with
// w_ij = p_i P_ij - [labels_i == labels_j] P_ij, r/c the row/column sums of W.
// Expanding sum_ij w_ij (x_i - x_j)(x_i - x_j)^T shows the two forms agree.
Matrix gradient_from(const Matrix& A, const Matrix& X, const std::vector<int>& labels,
                     const Matrix& P, const std::vector<double>& p) {
    const std::size_t n = X.rows();
    Matrix W(n, n);
    const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(n * n))
    for (long long i = 0; i < rows; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double same = labels[ii] == labels[j] ? 1.0 : 0.0;
            W(ii, j) = (p[ii] - same) * P(ii, j);
        }
    }
    Matrix M(n, n);
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(n * n))
    for (long long i = 0; i < rows; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < n; ++j) {
            M(ii, j) = -W(ii, j) - W(j, ii);
        }
        double r = 0.0;
        double c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r += W(ii, j);
            c += W(j, ii);
        }
        M(ii, ii) += r + c;
    }
    const Matrix MX = matmul_nn(M, X);      // n x m
    const Matrix G = matmul_tn(X, MX);      // m x m
    Matrix grad = matmul_nn(A, G);          // p x m
    for (std::size_t i = 0; i < grad.rows(); ++i) {
        for (std::size_t j = 0; j < grad.cols(); ++j) grad(i, j) *= 2.0;
    }
    return grad;
}

struct FitState {
    Matrix P;
    std::vector<double> per_point;
    double f = 0.0;
};

FitState evaluate(const Matrix& A, const Matrix& X, const std::vector<int>& labels) {
    FitState s;
    s.P = neighbor_probabilities(A, X);
    s.per_point = correct_pick_probabilities(s.P, labels);
    s.f = objective_from(s.per_point);
    return s;
}

Matrix initial_projection(std::size_t p, std::size_t m, const NcaConfig& config) {
    Rng rng(config.seed);
    Matrix A(p, m);
    if (config.init == NcaInit::ScaledIdentity) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                A(i, j) = (i == j ? 1.0 : 0.0) + rng.real(-1e-3, 1e-3);
            }
        }
    } else {
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                A(i, j) = rng.real(-scale, scale);
            }
        }
    }
    return A;
}

} // namespace

Matrix neighbor_probabilities(const Matrix& A, const Matrix& X) {
    check_projection_shapes(A, X);
    const std::size_t n = X.rows();
    if (n < 2) {
        throw Error(ErrorCode::DegenerateInput, "neighbor probabilities need at least 2 points");
    }
    const Matrix Y = matmul_nt(X, A);
    const Matrix dist = pairwise_sqdist(Y);
    Matrix P(n, n);
    const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(n * n))
    for (long long i = 0; i < rows; ++i) {
        softmax_row(dist, static_cast<std::size_t>(i), P);
    }
    return P;
}

double projected_distance(const Matrix& A, const std::vector<double>& x_i,
                          const std::vector<double>& x_j) {
    if (x_i.size() != A.cols() || x_j.size() != A.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "point length does not match projection input");
    }
    double acc = 0.0;
    for (std::size_t r = 0; r < A.rows(); ++r) {
        double yi = 0.0;
        double yj = 0.0;
        for (std::size_t c = 0; c < A.cols(); ++c) {
            yi += A(r, c) * x_i[c];
            yj += A(r, c) * x_j[c];
        }
        const double diff = yi - yj;
        acc += diff * diff;
    }
    return acc;
}

double objective(const Matrix& A, const Matrix& X, const std::vector<int>& labels) {
    check_labels(X, labels);
    const Matrix P = neighbor_probabilities(A, X);
    return objective_from(correct_pick_probabilities(P, labels));
}

Matrix objective_gradient(const Matrix& A, const Matrix& X, const std::vector<int>& labels) {
    check_labels(X, labels);
    const Matrix P = neighbor_probabilities(A, X);
    const std::vector<double> p = correct_pick_probabilities(P, labels);
    return gradient_from(A, X, labels, P, p);
}

NcaModel fit_nca(const Matrix& X_train, const std::vector<int>& labels, const NcaConfig& config) {
    check_labels(X_train, labels);
    const std::size_t n = X_train.rows();
    const std::size_t m = X_train.cols();
    if (n < 2) {
        throw Error(ErrorCode::DegenerateInput, "fit requires at least 2 points");
    }
    if (std::set<int>(labels.begin(), labels.end()).size() < 2) {
        throw Error(ErrorCode::SingleClass, "fit requires at least 2 classes");
    }
    if (config.p < 1 || config.p > m) {
        throw Error(ErrorCode::InvalidTargetDim,
                    "target dimension " + std::to_string(config.p) + " not in [1, " +
                        std::to_string(m) + "]");
    }
    if (config.backtrack_factor <= 0.0 || config.backtrack_factor >= 1.0 ||
        config.initial_step <= 0.0) {
        throw Error(ErrorCode::InvalidConfig, "step parameters out of range");
    }

    NcaModel model;
    model.A = initial_projection(config.p, m, config);
    FitState state = evaluate(model.A, X_train, labels);
    model.objective_trace.push_back(state.f);

    constexpr int kMaxBacktracks = 60;
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        const Matrix grad = gradient_from(model.A, X_train, labels, state.P, state.per_point);
        double step = config.initial_step;
        bool improved = false;
        Matrix candidate(model.A.rows(), model.A.cols());
        FitState cand_state;
        for (int t = 0; t < kMaxBacktracks; ++t) {
            for (std::size_t i = 0; i < candidate.rows(); ++i) {
                for (std::size_t j = 0; j < candidate.cols(); ++j) {
                    candidate(i, j) = model.A(i, j) + step * grad(i, j);
                }
            }
            cand_state = evaluate(candidate, X_train, labels);
            if (cand_state.f > state.f) {
                improved = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (!improved) {
            // No ascent step helps; the current point is as good as this
            // search can make it.
            model.converged = true;
            return model;
        }
        const double gain = cand_state.f - state.f;
        const double rel = gain / std::max(state.f, 1e-12);
        model.A = candidate;
        state = std::move(cand_state);
        model.objective_trace.push_back(state.f);
        if (rel < config.tolerance) {
            model.converged = true;
            return model;
        }
    }
    model.converged = false;
    return model;
}

Matrix transform(const NcaModel& model, const Matrix& X) {
    check_projection_shapes(model.A, X);
    return matmul_nt(X, model.A);
}

namespace serial {

Matrix neighbor_probabilities(const Matrix& A, const Matrix& X) {
    check_projection_shapes(A, X);
    const std::size_t n = X.rows();
    if (n < 2) {
        throw Error(ErrorCode::DegenerateInput, "neighbor probabilities need at least 2 points");
    }
    const Matrix Y = serial::matmul_nt(X, A);
    const Matrix dist = serial::pairwise_sqdist(Y);
    Matrix P(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        softmax_row(dist, i, P);
    }
    return P;
}

double objective(const Matrix& A, const Matrix& X, const std::vector<int>& labels) {
    check_labels(X, labels);
    const Matrix P = serial::neighbor_probabilities(A, X);
    return objective_from(correct_pick_probabilities(P, labels));
}

Matrix objective_gradient(const Matrix& A, const Matrix& X, const std::vector<int>& labels) {
    check_labels(X, labels);
    const std::size_t n = X.rows();
    const std::size_t m = X.cols();
    const Matrix P = serial::neighbor_probabilities(A, X);
    const std::vector<double> p = correct_pick_probabilities(P, labels);
    // Literal form: accumulate the weighted outer products of the pairwise
    // differences, then left-multiply by 2A.
    Matrix inner(m, m);
    std::vector<double> diff(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double same = labels[i] == labels[j] ? 1.0 : 0.0;
            const double w = (p[i] - same) * P(i, j);
            if (w == 0.0) continue;
            for (std::size_t c = 0; c < m; ++c) diff[c] = X(i, c) - X(j, c);
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = 0; b < m; ++b) {
                    inner(a, b) += w * diff[a] * diff[b];
                }
            }
        }
    }
    Matrix grad = serial::matmul_nn(A, inner);
    for (std::size_t i = 0; i < grad.rows(); ++i) {
        for (std::size_t j = 0; j < grad.cols(); ++j) grad(i, j) *= 2.0;
    }
    return grad;
}

} // namespace serial

} // namespace reducebench
