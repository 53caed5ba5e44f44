#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tvtv {

// Runs fn(k) for k in [0, count) on up to `workers` threads with a static
// contiguous partition. Each index is visited exactly once, so results are
// independent of the worker count as long as fn(k) only writes slot k.
// The first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = count / workers;
        const std::size_t extra = count % workers;
        std::size_t begin = 0;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t k = begin; k < end; ++k) fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
            begin = end;
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

inline std::size_t resolve_workers(std::size_t hint) {
    if (hint != 0) return hint;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace tvtv
