#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace parlp {

// Process-wide worker count. Results must not depend on it: parallel loops
// only ever write disjoint output slots; reductions happen afterwards in a
// fixed order.
inline int& thread_count_ref() {
    static int count = static_cast<int>(
        std::min(4u, std::max(1u, std::thread::hardware_concurrency())));
    return count;
}

inline void set_thread_count(int n) { thread_count_ref() = std::max(1, n); }
inline int thread_count() { return thread_count_ref(); }

template <class Fn>
inline void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
    const std::size_t total = end > begin ? end - begin : 0;
    const int workers = thread_count();
    if (total == 0) return;
    if (workers <= 1 || total < 64) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::size_t chunks = static_cast<std::size_t>(workers);
    const std::size_t step = (total + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t lo = begin + c * step;
        if (lo >= end) break;
        const std::size_t hi = std::min(end, lo + step);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace parlp
