#pragma once

// Chunked parallel loop. Each index is handled exactly once and callers
// write results into per-index slots, so output never depends on the number
// of workers. The first exception (lowest index) is rethrown.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tsxfer::detail {

template <class F>
void parallel_for(std::size_t n, F&& body, std::size_t min_parallel = 32) {
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1 || n < min_parallel) {
        run(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back(run, b, std::min(n, b + chunk));
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tsxfer::detail
