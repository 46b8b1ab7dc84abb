#include "meshwave/parallel.hpp"

namespace meshwave {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(g_threads), n == 0 ? 1 : n);
    if (workers <= 1) {
        block_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                block_fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace meshwave
