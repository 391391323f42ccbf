#pragma once

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcf {

// How trial loops run. Both produce identical results: each trial writes its
// own slot and every reduction happens afterwards, in index order.
enum class Execution {
    serial,
    parallel,
};

inline int worker_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_worker_count(int n)
{
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Serial reference: out[i] = fn(i).
template <class T, class Fn>
std::vector<T> map_trials_serial(std::size_t count, Fn&& fn)
{
    std::vector<T> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = fn(i);
    return out;
}

// OpenMP kernel: out[i] = fn(i). The first exception thrown by any trial is
// rethrown on the calling thread once the loop has drained.
template <class T, class Fn>
std::vector<T> map_trials_parallel(std::size_t count, Fn&& fn)
{
    std::vector<T> out(count);
    std::exception_ptr failure;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(rcf_ensemble_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

template <class T, class Fn>
std::vector<T> map_trials(std::size_t count, Fn&& fn, Execution ex = Execution::parallel)
{
    if (ex == Execution::serial)
        return map_trials_serial<T>(count, std::forward<Fn>(fn));
    return map_trials_parallel<T>(count, std::forward<Fn>(fn));
}

} // namespace rcf
