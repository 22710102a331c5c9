#pragma once

/*
 * Deterministic strided parallel loop. Worker t handles indices t, t+T,
 * t+2T, ... so the set of indices per worker is a function of (n, threads)
 * alone; callers write into preallocated slots and outputs cannot depend on
 * the schedule.
 */

#include <functional>
#include <thread>
#include <vector>

namespace dynmand {

template <class Fn> void parallel_for(std::size_t n, int threads, Fn&& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t t_count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        pool.emplace_back([t, t_count, n, &body] {
            for (std::size_t i = t; i < n; i += t_count) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace dynmand
