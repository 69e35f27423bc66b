#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace wfa {

// WFA_THREADS overrides the requested count; 0 means all hardware threads.
inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("WFA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) requested = v;
    }
    if (requested <= 0) requested = static_cast<int>(std::thread::hardware_concurrency());
    return requested > 0 ? requested : 1;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots, so the
// outcome does not depend on scheduling. The lowest-index exception is rethrown.
template <class F>
void parallel_for(int n, int threads, F&& fn) {
    threads = std::min(resolve_threads(threads), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace wfa
