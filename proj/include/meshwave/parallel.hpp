#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace meshwave {

/// Global worker cap used by parallel_for; 1 disables threading.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
/// worker; callers must ensure disjoint writes. Results are independent of the
/// worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn);

template <class Fn>
void parallel_for_each(std::size_t n, Fn&& fn) {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace meshwave
