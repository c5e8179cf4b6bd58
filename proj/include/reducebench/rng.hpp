#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace reducebench {

/// Seeded random source with fully specified output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard,
/// and every derived quantity below is defined in terms of raw engine draws.
/// std::uniform_int_distribution / std::uniform_real_distribution /
/// std::shuffle are implementation-defined and are deliberately not used, so
/// the same seed gives the same values on every platform and standard library.
///
///   below(n)       rejection sampling: draw u64 words, discard the biased
///                  low range, return r % n. One engine draw per accepted
///                  word (more only when rejected).
///   real01()       (next_u64() >> 11) * 2^-53, uniform on [0, 1).
///   shuffle(v)     Fisher-Yates from the back: for i = n-1 .. 1 swap
///                  v[i] with v[below(i + 1)].
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    double real01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double real(double lo, double hi) { return lo + real01() * (hi - lo); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace reducebench
