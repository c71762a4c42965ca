#pragma once
#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

// Replica-parallel engine.  Each replica is a pure function of its index;
// results land in preallocated per-replica slots, so any schedule and any
// thread count produce identical output.  run_replicas_serial is the
// reference implementation the tests compare against.

namespace percolab {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("PERCOLAB_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class Fn>
void run_replicas_serial(uint64_t n, Fn&& fn) {
    for (uint64_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
void run_replicas(uint64_t n, int threads, Fn&& fn) {
    int t = resolve_threads(threads);
    if (t <= 1) {
        run_replicas_serial(n, fn);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(t)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) fn(static_cast<uint64_t>(i));
#else
    run_replicas_serial(n, fn);
#endif
}

} // namespace percolab
