#include "reducebench/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reducebench {

int thread_cap() {
    static const int cap = [] {
        int hw = 1;
#ifdef _OPENMP
        hw = omp_get_max_threads();
#endif
        const char* env = std::getenv("REDUCEBENCH_THREADS");
        if (env != nullptr) {
            const long requested = std::strtol(env, nullptr, 10);
            if (requested > 0 && requested < hw) return static_cast<int>(requested);
        }
        return hw;
    }();
    return cap;
}

} // namespace reducebench
