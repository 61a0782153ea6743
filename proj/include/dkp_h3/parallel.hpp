#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dkp_h3 {

/// Worker count: hardware concurrency, capped by DKP_H3_THREADS when set.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("DKP_H3_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1)
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception &) {
            // unparsable: ignore
        }
    }
    return n;
}

/// Runs body(i) for i in [0, n). Each index is written by exactly one worker,
/// so results stored by index are independent of scheduling. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body &&body, unsigned threads = 0) {
    if (threads == 0)
        threads = worker_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads)
                    body(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto &th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace dkp_h3
