#include "ccg/parallel.hpp"

#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccg::par {

int hardware_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_index(std::size_t count, int workers, ExecMode mode,
               const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const int w = workers > 0 ? workers : hardware_workers();

    if (mode == ExecMode::serial || w == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

#ifdef _OPENMP
    // Exceptions must not cross the parallel region.
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(w)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    for (std::size_t i = 0; i < count; ++i) fn(i);
#endif
}

}  // namespace ccg::par
