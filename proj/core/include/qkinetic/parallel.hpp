#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qk {

/// Worker count: QKINETIC_THREADS if set, otherwise hardware concurrency.
inline unsigned worker_count()
{
    if (const char* env = std::getenv("QKINETIC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(batch) for batch in [0, n_batches) on a worker pool and returns
/// the per-batch results in batch order. Results are independent of the
/// worker count as long as fn depends only on the batch index.
template <class Result, class Fn>
std::vector<Result> run_batches(std::size_t n_batches, Fn&& fn)
{
    std::vector<Result> out(n_batches);
    unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n_batches, 1));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_batches; ++b)
            out[b] = fn(b);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_batches)
                    return;
                try {
                    out[b] = fn(b);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace qk
