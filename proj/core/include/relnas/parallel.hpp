#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace relnas {

/// Runs fn(0..count-1) across `workers` threads. Callers write results into
/// pre-sized slots indexed by the argument, so scheduling never affects the
/// outcome. workers <= 1 degrades to a plain loop.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        int i;
        while ((i = next.fetch_add(1)) < count) fn(i);
    };
    std::vector<std::thread> pool;
    const int spawn = std::min(workers, count) - 1;
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

inline int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace relnas
