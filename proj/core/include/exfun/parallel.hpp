#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace exfun {

/// Worker-thread cap: GBM_EXFUN_THREADS if set and > 0, else the hardware
/// concurrency.  Read on every call so tests can change it at runtime.
[[nodiscard]] unsigned thread_budget();

/// Runs fn(i) for i in [0, n) on up to thread_budget() threads, contiguous
/// chunks per thread.  Results must be written to disjoint, preallocated
/// slots so the outcome is independent of scheduling.  The first exception
/// thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, thread_budget()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    auto chunk = [&](std::size_t w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        try {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(chunk, w);
    chunk(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace exfun
