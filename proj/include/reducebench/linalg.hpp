#pragma once

#include <cstddef>
#include <vector>

#include "reducebench/errors.hpp"

namespace reducebench {

/// Dense row-major matrix of doubles. Value type, no views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double> row_copy(std::size_t r) const {
        return std::vector<double>(row(r), row(r) + cols_);
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// New matrix holding the given rows, in the given order.
    Matrix take_rows(const std::vector<std::size_t>& indices) const;

    bool all_finite() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Core kernels. The unqualified versions run the inner loops under OpenMP
// (one thread per output row, fixed-order accumulation, so results are
// bit-identical to the serial versions for any thread count). The
// serial:: twins are the plain loop nests, kept as the reference for tests
// and for the kernel benchmark.

/// a (r x k) * b^T (k x c from b: c x k)  ->  r x c
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// a (r x k) * b (k x c)  ->  r x c
Matrix matmul_nn(const Matrix& a, const Matrix& b);
/// a^T (k x r from a: r x k) * b (r x c)  ->  k x c
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// Per-column sums of a.
std::vector<double> column_sums(const Matrix& a);
/// d(i, j) = squared euclidean distance between rows i and j of y.
Matrix pairwise_sqdist(const Matrix& y);

namespace serial {
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_nn(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
std::vector<double> column_sums(const Matrix& a);
Matrix pairwise_sqdist(const Matrix& y);
} // namespace serial

/// sqrt of sum of squared differences; throws DimensionMismatch on length mismatch.
double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

double squared_distance(const double* a, const double* b, std::size_t n);

} // namespace reducebench
