#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace icdof {

// Static-chunk parallel loop. Bodies must write only to index-addressed
// slots, which keeps results independent of scheduling; reductions happen
// sequentially afterwards.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t n_threads, Fn&& body) {
    if (n_threads == 0) n_threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n);
    if (n_threads <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body]() {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace icdof
