#include "reducebench/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "reducebench/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reducebench {


Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw Error(ErrorCode::DimensionMismatch, "ragged row list");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const double* src = row(indices[i]);
        double* dst = out.row(i);
        for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
    }
    return out;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
    return std::sqrt(squared_distance(a.data(), b.data(), a.size()));
}

namespace serial {

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw Error(ErrorCode::DimensionMismatch, "matmul_nt inner dimensions");
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t t = 0; t < a.cols(); ++t) s += ai[t] * bj[t];
            c(i, j) = s;
        }
    }
    return c;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "matmul_nn inner dimensions");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const double v = ai[t];
            const double* bt = b.row(t);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += v * bt[j];
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "matmul_tn inner dimensions");
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        double* ci = c.row(i);
        for (std::size_t t = 0; t < a.rows(); ++t) {
            const double v = a(t, i);
            const double* bt = b.row(t);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += v * bt[j];
        }
    }
    return c;
}

std::vector<double> column_sums(const Matrix& a) {
    std::vector<double> s(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) s[j] += ai[j];
    }
    return s;
}

Matrix pairwise_sqdist(const Matrix& y) {
    Matrix d(y.rows(), y.rows());
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.rows(); ++j)
            d(i, j) = squared_distance(y.row(i), y.row(j), y.cols());
    return d;
}

} // namespace serial

// OpenMP versions. Each output row is produced by exactly one thread with
// the same inner-loop order as the serial twin, so the result does not
// depend on the thread count.

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw Error(ErrorCode::DimensionMismatch, "matmul_nt inner dimensions");
    Matrix c(a.rows(), b.rows());
    const std::size_t work = a.rows() * b.rows() * a.cols();
    const long long nrows = static_cast<long long>(a.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(work))
    for (long long i = 0; i < nrows; ++i) {
        const double* ai = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t t = 0; t < a.cols(); ++t) s += ai[t] * bj[t];
            c(i, j) = s;
        }
    }
    return c;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "matmul_nn inner dimensions");
    Matrix c(a.rows(), b.cols());
    const std::size_t work = a.rows() * a.cols() * b.cols();
    const long long nrows = static_cast<long long>(a.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(work))
    for (long long i = 0; i < nrows; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const double v = ai[t];
            const double* bt = b.row(t);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += v * bt[j];
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "matmul_tn inner dimensions");
    Matrix c(a.cols(), b.cols());
    const std::size_t work = a.cols() * a.rows() * b.cols();
    const long long nrows = static_cast<long long>(a.cols());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(work))
    for (long long i = 0; i < nrows; ++i) {
        double* ci = c.row(i);
        for (std::size_t t = 0; t < a.rows(); ++t) {
            const double v = a(t, i);
            const double* bt = b.row(t);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += v * bt[j];
        }
    }
    return c;
}

std::vector<double> column_sums(const Matrix& a) {
    std::vector<double> s(a.cols(), 0.0);
    const long long ncols = static_cast<long long>(a.cols());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(a.rows() * a.cols()))
    for (long long j = 0; j < ncols; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) v += a(i, j);
        s[j] = v;
    }
    return s;
}

Matrix pairwise_sqdist(const Matrix& y) {
    Matrix d(y.rows(), y.rows());
    const std::size_t work = y.rows() * y.rows() * y.cols();
    const long long nrows = static_cast<long long>(y.rows());
#pragma omp parallel for schedule(static) num_threads(thread_cap()) \
    if (parallel_worthwhile(work))
    for (long long i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < y.rows(); ++j)
            d(i, j) = squared_distance(y.row(i), y.row(j), y.cols());
    return d;
}

} // namespace reducebench
