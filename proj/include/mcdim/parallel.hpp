#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "mcdim/kahan.hpp"

namespace mcdim {

// Worker count: explicit request > MCDIM_WORKERS > hardware concurrency.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MCDIM_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(block_index, begin, end) over fixed-size blocks of [0, n).
// Block boundaries do not depend on the worker count, so block-indexed
// outputs are identical for any number of workers. Exceptions thrown by fn
// are rethrown on the calling thread (first one wins).
template <class F>
void parallel_for_blocks(std::int64_t n, int workers, F&& fn,
                         std::int64_t block_size = 4096) {
    if (n <= 0) return;
    const std::int64_t nblocks = (n + block_size - 1) / block_size;
    workers = resolve_workers(workers);
    if (workers > nblocks) workers = static_cast<int>(nblocks);

    if (workers <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) {
            const std::int64_t lo = b * block_size;
            const std::int64_t hi = std::min(n, lo + block_size);
            fn(b, lo, hi);
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::atomic_flag error_claim = ATOMIC_FLAG_INIT;

    auto worker = [&]() {
        for (;;) {
            const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks || failed.load(std::memory_order_relaxed)) return;
            const std::int64_t lo = b * block_size;
            const std::int64_t hi = std::min(n, lo + block_size);
            try {
                fn(b, lo, hi);
            } catch (...) {
                if (!error_claim.test_and_set()) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Compensated reduction of term(i) over [0, n): Kahan within fixed blocks,
// then the block partials combined in index order. The result is bit-identical
// for any worker count.
template <class F>
double deterministic_sum(std::int64_t n, int workers, F&& term,
                         std::int64_t block_size = 4096) {
    if (n <= 0) return 0.0;
    const std::int64_t nblocks = (n + block_size - 1) / block_size;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
    parallel_for_blocks(
        n, workers,
        [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
            kahan_sum<double> s;
            for (std::int64_t i = lo; i < hi; ++i) s += term(i);
            partial[static_cast<std::size_t>(b)] = s.get();
        },
        block_size);
    kahan_sum<double> total;
    for (double v : partial) total += v;
    return total.get();
}

} // namespace mcdim
