#pragma once

// Synthetic data builders shared by the test binaries.

#include <fstream>
#include <string>
#include <vector>

#include "reducebench/linalg.hpp"
#include "reducebench/rng.hpp"

namespace testsupport {

struct Labeled {
    reducebench::Matrix X;
    std::vector<int> y;
};

/// classes cubes of side `spread` whose centers sit `gap` apart along every
/// axis; trivially separable when gap >> spread.
inline Labeled blobs(std::size_t per_class, int classes, std::size_t dim, double spread,
                     double gap, reducebench::Rng& rng) {
    Labeled out;
    out.X = reducebench::Matrix(per_class * static_cast<std::size_t>(classes), dim);
    out.y.resize(out.X.rows());
    std::size_t r = 0;
    for (int c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i, ++r) {
            for (std::size_t f = 0; f < dim; ++f) {
                out.X(r, f) = static_cast<double>(c) * gap + rng.real(0.0, spread);
            }
            out.y[r] = c;
        }
    }
    return out;
}

/// Two 2-D clouds on either side of x0 = 0, each at least `margin` away.
inline Labeled separable_2d(std::size_t per_class, double margin, reducebench::Rng& rng) {
    Labeled out;
    out.X = reducebench::Matrix(per_class * 2, 2);
    out.y.resize(out.X.rows());
    for (std::size_t i = 0; i < per_class; ++i) {
        out.X(i, 0) = -margin - rng.real(0.0, 2.0);
        out.X(i, 1) = rng.real(-2.0, 2.0);
        out.y[i] = -1;
        out.X(per_class + i, 0) = margin + rng.real(0.0, 2.0);
        out.X(per_class + i, 1) = rng.real(-2.0, 2.0);
        out.y[per_class + i] = 1;
    }
    return out;
}

/// n points of the form base + s*u + t*v inside [0,1]^dim (a 2-D affine
/// patch), for testing that a width-4 code can reconstruct them.
inline reducebench::Matrix affine_subspace(std::size_t n, std::size_t dim,
                                           reducebench::Rng& rng) {
    std::vector<double> base(dim), u(dim), v(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        base[f] = 0.4 + 0.05 * rng.real01();
        u[f] = rng.real(-1.0, 1.0);
        v[f] = rng.real(-1.0, 1.0);
    }
    reducebench::Matrix X(n, dim);
    for (std::size_t r = 0; r < n; ++r) {
        const double s = rng.real(-0.3, 0.3);
        const double t = rng.real(-0.3, 0.3);
        for (std::size_t f = 0; f < dim; ++f) {
            double x = base[f] + s * u[f] + t * v[f];
            if (x < 0.0) x = 0.0;
            if (x > 1.0) x = 1.0;
            X(r, f) = x;
        }
    }
    return X;
}

/// Random points with uniformly random labels; classes may be imbalanced but
/// every class in [0, classes) gets at least one point.
inline Labeled random_labeled(std::size_t n, int classes, std::size_t dim, double lo, double hi,
                              reducebench::Rng& rng) {
    Labeled out;
    out.X = reducebench::Matrix(n, dim);
    out.y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t f = 0; f < dim; ++f) out.X(r, f) = rng.real(lo, hi);
        out.y[r] = r < static_cast<std::size_t>(classes)
                       ? static_cast<int>(r)
                       : static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    }
    return out;
}

inline void write_csv(const std::string& path, const Labeled& data,
                      const std::string& label_prefix = "c") {
    std::ofstream out(path);
    for (std::size_t r = 0; r < data.X.rows(); ++r) {
        for (std::size_t c = 0; c < data.X.cols(); ++c) out << data.X(r, c) << ',';
        out << label_prefix << data.y[r] << '\n';
    }
}

} // namespace testsupport
