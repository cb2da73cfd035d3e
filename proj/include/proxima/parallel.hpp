#pragma once

#include <cstdint>
#if defined(_OPENMP)
#include <omp.h>
#endif

namespace proxima {

inline int max_threads()
{
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs f(i) for i in [0, n). Falls back to a plain loop without OpenMP or
/// when already inside a parallel region.
template <class F>
void parallel_for(std::int64_t n, F&& f)
{
#if defined(_OPENMP)
    if (n > 1 && !omp_in_parallel()) {
        #pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

} // namespace proxima
