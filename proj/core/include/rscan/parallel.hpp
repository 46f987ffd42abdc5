#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rscan {

/// Worker count: ROBUST_SCAN_THREADS when set and > 0, otherwise the
/// hardware concurrency (minimum 1).
inline std::size_t worker_count() {
    if (const char* env = std::getenv("ROBUST_SCAN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace detail {

template <typename F>
void parallel_blocks(std::size_t n, std::size_t threads, F&& block) {
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        block(std::size_t{0}, n);
        return;
    }
    const std::size_t k = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(k);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < k; ++w) {
        const std::size_t lo = n * w / k;
        const std::size_t hi = n * (w + 1) / k;
        pool.emplace_back([&, lo, hi] {
            try {
                block(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Runs body(i) for i in [0, n) on up to worker_count() threads, in
/// contiguous index blocks. Callers own determinism: write results into
/// per-index slots and reduce in index order afterwards.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    detail::parallel_blocks(n, worker_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) body(i);
    });
}

}  // namespace rscan
