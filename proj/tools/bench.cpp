// Times each OpenMP kernel against its serial reference on synthetic data and
// checks that the outputs agree. Run with REDUCEBENCH_THREADS set to compare
// thread counts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "reducebench/enn.hpp"
#include "reducebench/knn.hpp"
#include "reducebench/linalg.hpp"
#include "reducebench/nca.hpp"
#include "reducebench/parallel.hpp"
#include "reducebench/rng.hpp"
#include "reducebench/svm.hpp"

namespace {

using reducebench::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, reducebench::Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.real(-1.0, 1.0);
    }
    return m;
}

std::vector<int> random_labels(std::size_t n, int classes, reducebench::Rng& rng) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    }
    return labels;
}

template <typename F>
double best_seconds(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
        if (s < best) best = s;
    }
    return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            m = std::max(m, std::fabs(a(r, c) - b(r, c)));
        }
    }
    return m;
}

std::size_t label_mismatches(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m += a[i] != b[i];
    return m;
}

void print_row(const std::string& name, const std::string& size, double serial_s,
               double parallel_s, const std::string& agreement) {
    std::printf("%-28s %-14s %10.3f %10.3f %8.2fx   %s\n", name.c_str(), size.c_str(),
                serial_s * 1e3, parallel_s * 1e3,
                parallel_s > 0 ? serial_s / parallel_s : 0.0, agreement.c_str());
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = 1200;
    std::size_t d = 48;
    int reps = 3;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--rows" && i + 1 < argc) {
            n = static_cast<std::size_t>(std::stoul(argv[++i]));
        } else if (arg == "--cols" && i + 1 < argc) {
            d = static_cast<std::size_t>(std::stoul(argv[++i]));
        } else if (arg == "--reps" && i + 1 < argc) {
            reps = std::stoi(argv[++i]);
        } else {
            std::printf("usage: reducebench-bench [--rows N] [--cols D] [--reps R]\n");
            return arg == "--help" || arg == "-h" ? 0 : 2;
        }
    }

    std::printf("threads: %d, rows: %zu, cols: %zu, best of %d runs, times in ms\n\n",
                reducebench::thread_cap(), n, d, reps);
    std::printf("%-28s %-14s %10s %10s %9s   %s\n", "kernel", "size", "serial", "parallel",
                "speedup", "agreement");

    reducebench::Rng rng(7);
    const Matrix a = random_matrix(n, d, rng);
    const Matrix b = random_matrix(n, d, rng);
    const Matrix bt = random_matrix(d, n, rng);
    const std::string nxd = std::to_string(n) + "x" + std::to_string(d);

    {
        Matrix out_s, out_p;
        const double ts = best_seconds(reps, [&] { out_s = reducebench::serial::matmul_nt(a, b); });
        const double tp = best_seconds(reps, [&] { out_p = reducebench::matmul_nt(a, b); });
        print_row("matmul_nt", nxd, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }
    {
        Matrix out_s, out_p;
        const double ts =
            best_seconds(reps, [&] { out_s = reducebench::serial::matmul_nn(a, bt); });
        const double tp = best_seconds(reps, [&] { out_p = reducebench::matmul_nn(a, bt); });
        print_row("matmul_nn", nxd, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }
    {
        Matrix out_s, out_p;
        const double ts = best_seconds(reps, [&] { out_s = reducebench::serial::matmul_tn(a, b); });
        const double tp = best_seconds(reps, [&] { out_p = reducebench::matmul_tn(a, b); });
        print_row("matmul_tn", nxd, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }
    {
        std::vector<double> out_s, out_p;
        const double ts =
            best_seconds(reps, [&] { out_s = reducebench::serial::column_sums(a); });
        const double tp = best_seconds(reps, [&] { out_p = reducebench::column_sums(a); });
        print_row("column_sums", nxd, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }
    {
        Matrix out_s, out_p;
        const double ts =
            best_seconds(reps, [&] { out_s = reducebench::serial::pairwise_sqdist(a); });
        const double tp = best_seconds(reps, [&] { out_p = reducebench::pairwise_sqdist(a); });
        print_row("pairwise_sqdist", nxd, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }

    // NCA kernels on a smaller instance; the serial gradient is the literal
    // quadratic-cost form, so agreement is within tolerance, not bit-exact.
    const std::size_t nca_n = std::min<std::size_t>(n, 400);
    const std::size_t nca_d = std::min<std::size_t>(d, 16);
    const Matrix X = random_matrix(nca_n, nca_d, rng);
    const Matrix A = random_matrix((nca_d + 1) / 2, nca_d, rng);
    const std::vector<int> labels = random_labels(nca_n, 3, rng);
    const std::string nca_size = std::to_string(nca_n) + "x" + std::to_string(nca_d);
    {
        Matrix out_s, out_p;
        const double ts = best_seconds(
            reps, [&] { out_s = reducebench::serial::neighbor_probabilities(A, X); });
        const double tp =
            best_seconds(reps, [&] { out_p = reducebench::neighbor_probabilities(A, X); });
        print_row("nca_probabilities", nca_size, ts, tp,
                  out_s == out_p ? "bit-identical" : "DIFFERS");
    }
    {
        Matrix out_s, out_p;
        const double ts = best_seconds(
            reps, [&] { out_s = reducebench::serial::objective_gradient(A, X, labels); });
        const double tp =
            best_seconds(reps, [&] { out_p = reducebench::objective_gradient(A, X, labels); });
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max diff %.2e", max_abs_diff(out_s, out_p));
        print_row("nca_gradient", nca_size, ts, tp, buf);
    }

    // Batch classifier prediction.
    const std::size_t q = std::max<std::size_t>(n / 4, 1);
    const Matrix queries = random_matrix(q, nca_d, rng);
    const Matrix train = random_matrix(std::min<std::size_t>(n, 800), nca_d, rng);
    const std::vector<int> train_labels = random_labels(train.rows(), 3, rng);
    const std::string pred_size =
        std::to_string(q) + "q/" + std::to_string(train.rows()) + "t";
    {
        const reducebench::KnnModel model = reducebench::fit_knn(train, train_labels, 5);
        std::vector<int> out_s, out_p;
        const double ts = best_seconds(
            reps, [&] { out_s = reducebench::serial::knn_predict_batch(model, queries); });
        const double tp =
            best_seconds(reps, [&] { out_p = reducebench::knn_predict_batch(model, queries); });
        print_row("knn_predict_batch", pred_size, ts, tp,
                  label_mismatches(out_s, out_p) == 0 ? "identical" : "DIFFERS");
    }
    {
        const reducebench::EnnModel model = reducebench::fit_enn(train, train_labels, 5);
        std::vector<int> out_s, out_p;
        const double ts = best_seconds(
            reps, [&] { out_s = reducebench::serial::enn_predict_batch(model, queries); });
        const double tp =
            best_seconds(reps, [&] { out_p = reducebench::enn_predict_batch(model, queries); });
        print_row("enn_predict_batch", pred_size, ts, tp,
                  label_mismatches(out_s, out_p) == 0 ? "identical" : "DIFFERS");
    }
    {
        const reducebench::SvmMulticlassModel model =
            reducebench::svm_train_multiclass(train, train_labels, 1.0, 1e-3);
        std::vector<int> out_s, out_p;
        const double ts = best_seconds(
            reps, [&] { out_s = reducebench::serial::svm_predict_batch(model, queries); });
        const double tp =
            best_seconds(reps, [&] { out_p = reducebench::svm_predict_batch(model, queries); });
        print_row("svm_predict_batch", pred_size, ts, tp,
                  label_mismatches(out_s, out_p) == 0 ? "identical" : "DIFFERS");
    }
    return 0;
}
