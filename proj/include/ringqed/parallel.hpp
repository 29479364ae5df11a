// parallel.hpp — deterministic trial-parallel map.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ringqed {

// Worker count: explicit value if positive, else the hardware concurrency.
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, n) on `workers` threads. Results are stored
// by index, so the output does not depend on scheduling.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<Result> results(n);
    const unsigned threads = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace ringqed
