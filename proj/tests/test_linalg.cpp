#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "reducebench/errors.hpp"
#include "reducebench/linalg.hpp"
#include "reducebench/rng.hpp"

using namespace reducebench;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.real(-3.0, 3.0);
    }
    return m;
}

} // namespace

TEST_CASE("matrix construction and access") {
    Matrix m(2, 3, 1.5);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 1.5);
    m(0, 1) = -2.0;
    CHECK(m(0, 1) == -2.0);

    const Matrix id = Matrix::identity(3);
    CHECK(id(0, 0) == 1.0);
    CHECK(id(0, 1) == 0.0);
    CHECK(id(2, 2) == 1.0);

    const Matrix fr = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(fr.rows() == 2);
    CHECK(fr(1, 0) == 3.0);
}

TEST_CASE("take_rows picks rows in the given order") {
    const Matrix m = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}, {4, 4}});
    const Matrix sub = m.take_rows({3, 0});
    CHECK(sub.rows() == 2);
    CHECK(sub(0, 0) == 4.0);
    CHECK(sub(1, 0) == 1.0);
}

TEST_CASE("matmul_nt against hand result") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
    const Matrix c = matmul_nt(a, b); // a * b^T
    CHECK(c(0, 0) == 17.0);
    CHECK(c(0, 1) == 23.0);
    CHECK(c(1, 0) == 39.0);
    CHECK(c(1, 1) == 53.0);
}

TEST_CASE("matmul_nn and matmul_tn against hand results") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
    const Matrix nn = matmul_nn(a, b);
    CHECK(nn(0, 0) == 19.0);
    CHECK(nn(1, 1) == 50.0);
    const Matrix tn = matmul_tn(a, b); // a^T * b
    CHECK(tn(0, 0) == 1 * 5 + 3 * 7);
    CHECK(tn(1, 1) == 2 * 6 + 4 * 8);
}

TEST_CASE("parallel kernels are bit-identical to the serial references") {
    Rng rng(11);
    for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{1, 1},
                              {3, 5},
                              {17, 4},
                              {64, 9},
                              {130, 33}}) {
        const Matrix a = random_matrix(n, m, rng);
        const Matrix b = random_matrix(n, m, rng);
        const Matrix c = random_matrix(m, n, rng);
        CHECK(matmul_nt(a, b) == serial::matmul_nt(a, b));
        CHECK(matmul_nn(a, c) == serial::matmul_nn(a, c));
        CHECK(matmul_tn(a, b) == serial::matmul_tn(a, b));
        CHECK(column_sums(a) == serial::column_sums(a));
        CHECK(pairwise_sqdist(a) == serial::pairwise_sqdist(a));
    }
}

TEST_CASE("pairwise_sqdist values and symmetry") {
    const Matrix y = Matrix::from_rows({{0, 0}, {3, 4}, {0, 1}});
    const Matrix d = pairwise_sqdist(y);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(0, 1) == 25.0);
    CHECK(d(1, 0) == 25.0);
    CHECK(d(0, 2) == 1.0);
    CHECK(d(1, 2) == 9 + 9);
}

TEST_CASE("euclidean_distance contract") {
    CHECK(euclidean_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(euclidean_distance({0, 0}, {3, 4}) == 5.0);
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> a(4), b(4);
        for (int c = 0; c < 4; ++c) {
            a[c] = rng.real(-9.0, 9.0);
            b[c] = rng.real(-9.0, 9.0);
        }
        CHECK(euclidean_distance(a, b) == euclidean_distance(b, a));
    }
    CHECK_THROWS_AS(euclidean_distance({1.0}, {1.0, 2.0}), Error);
}

TEST_CASE("matmul dimension mismatches throw") {
    const Matrix a(2, 3);
    const Matrix b(2, 4);
    CHECK_THROWS_AS(matmul_nt(a, b), Error);
    CHECK_THROWS_AS(matmul_nn(a, Matrix(4, 2)), Error);
}
