#pragma once

#include <cstddef>

namespace reducebench {

/// Number of OpenMP threads the kernels may use. Controlled by the
/// REDUCEBENCH_THREADS environment variable (0 or unset = all available).
/// Read once on first use.
int thread_cap();

/// True when a loop of `work` fused iterations is worth a parallel region.
/// Every parallel kernel in this library computes each output element on a
/// single thread with a fixed-order inner loop, so results are bit-identical
/// for any thread count, including 1.
inline bool parallel_worthwhile(std::size_t work) {
    return work >= 16384;
}

} // namespace reducebench
