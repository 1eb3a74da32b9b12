#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace tvreg {

// Run fn(i) for i in [0, n) on up to n_threads workers. Work items write
// results into caller-owned slots keyed by i, so the outcome does not depend
// on the thread count or the scheduling order. n_threads <= 1 runs inline;
// n_threads == 0 uses the hardware count.
inline void parallel_for(long n, const std::function<void(long)>& fn, int n_threads = 0) {
    if (n <= 0) return;
    if (n_threads == 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(n_threads, n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (long i = w; i < n; i += workers) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace tvreg
