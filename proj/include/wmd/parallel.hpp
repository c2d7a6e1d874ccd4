#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wmd {

/// Worker count used when the caller does not pick one.
inline std::size_t default_workers() noexcept {
#ifdef _OPENMP
    return static_cast<std::size_t>(omp_get_max_threads());
#else
    return 1;
#endif
}

/// Runs body(k) once for every logical worker k in [0, num_workers) inside a
/// single OpenMP team. Logical workers are strided over however many threads
/// the runtime grants, so the mapping from worker id to work never depends on
/// the actual team size. Exceptions are captured per worker and the one from
/// the lowest worker id is rethrown after the join.
template <typename Body>
void for_each_worker(std::size_t num_workers, Body&& body) {
    if (num_workers <= 1) {
        if (num_workers == 1) {
            body(std::size_t{0});
        }
        return;
    }
    std::vector<std::exception_ptr> errors(num_workers);
#ifdef _OPENMP
#pragma omp parallel num_threads(static_cast<int>(num_workers))
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        const auto team = static_cast<std::size_t>(omp_get_num_threads());
        for (std::size_t k = tid; k < num_workers; k += team) {
            try {
                body(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    }
#else
    for (std::size_t k = 0; k < num_workers; ++k) {
        try {
            body(k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
#endif
    for (const auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
}

/// Contiguous static chunk [begin, end) of `count` items for worker k of p.
struct Chunk {
    std::size_t begin;
    std::size_t end;
};

inline Chunk static_chunk(std::size_t count, std::size_t k, std::size_t p) noexcept {
    return {count * k / p, count * (k + 1) / p};
}

} // namespace wmd
