#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lasym {

/// Process-wide worker count for parallel loops (0 = hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Static-partition parallel loop. Each index is visited exactly once and
/// writes only to its own slot in the caller's output, so results do not
/// depend on the partitioning.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    const int workers = thread_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    std::atomic<std::size_t> next{0};
    constexpr std::size_t chunk = 16;
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::size_t end = std::min(begin + chunk, n);
                for (std::size_t i = begin; i < end; ++i) body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lasym
