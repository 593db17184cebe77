// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Static-chunk fork/join loop. Results must be written to disjoint,
 * index-addressed slots so the outcome is independent of thread count.
 */
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qkge {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Invokes body(begin, end) over contiguous chunks of [0, n). With one
/// thread the body runs inline. The first exception thrown by any chunk is
/// rethrown after all threads join.
template <typename Body>
void parallel_for(std::size_t n, unsigned n_threads, Body &&body) {
    n_threads = resolve_threads(n_threads);
    if (n == 0) {
        return;
    }
    if (n_threads <= 1 || n == 1) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunks =
        n_threads < n ? static_cast<std::size_t>(n_threads) : n;
    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        const std::size_t end = begin + len;
        workers.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
        begin = end;
    }
    for (std::thread &worker : workers) {
        worker.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace qkge
