#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace esfem {

/// Process-wide worker count used by assembly, node evolution and error quadrature.
/// Defaults to 1 so results do not depend on the machine.
void set_thread_count(int count);
int thread_count();

/// Calls body(i) for i in [0, n). Iterations are split into contiguous chunks;
/// body must only write to storage owned by index i.
template <class Body>
void parallel_for(std::size_t n, Body&& body)
{
    const auto workers = static_cast<std::size_t>(std::max(1, thread_count()));
    if (workers == 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
    for (std::size_t i = 0; i < std::min(n, chunk); ++i) body(i);
    for (auto& t : pool) t.join();
}

}  // namespace esfem
