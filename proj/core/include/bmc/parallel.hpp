#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bmc {

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(index, worker) for every index in [0, n). Each worker id is owned by one
// thread, so per-worker scratch state needs no locking. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i, 0u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n || failed.load(std::memory_order_relaxed)) return;
                    try {
                        fn(i, w);
                    } catch (...) {
                        std::lock_guard lk(err_mu);
                        if (!err) err = std::current_exception();
                        failed = true;
                        return;
                    }
                }
            });
        }
    }
    if (err) std::rethrow_exception(err);
}

} // namespace bmc

#include "bmc/rng.hpp"

#include <cstdint>

namespace bmc {

// n draws from fixed-size chunks, chunk c seeded by (seed, c). Output order and
// values are independent of the worker count.
template <class Draw>
std::vector<double> draw_samples(std::size_t n, std::uint64_t seed, unsigned workers, Draw&& draw) {
    constexpr std::size_t chunk = 4096;
    std::vector<double> out(n);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    parallel_for(chunks, workers, [&](std::size_t c, unsigned) {
        Engine eng = make_engine({seed, c});
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) out[i] = draw(eng);
    });
    return out;
}

} // namespace bmc
