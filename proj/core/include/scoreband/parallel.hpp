#ifndef SCOREBAND_PARALLEL_HPP
#define SCOREBAND_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace scoreband {

// Worker count: SCOREBAND_THREADS if set (clamped to >= 1), otherwise the
// hardware concurrency. Callers must keep results indexed by i so output is
// independent of scheduling.
inline unsigned worker_count() {
    if (const char* env = std::getenv("SCOREBAND_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {
// Nested parallel_for calls run serially so a parallel outer loop (e.g. over
// Monte Carlo reps) does not multiply thread counts in the inner loops.
inline thread_local bool inside_parallel_region = false;
}  // namespace detail

// Runs fn(i) for i in [0, n); fn must be safe to call concurrently.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1 || detail::inside_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            detail::inside_parallel_region = true;
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace scoreband

#endif
