#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tilecensus {

// Fixed-width fan-out facility handed to the modules. Tasks are indexed, so
// callers write results into per-index slots and merge in index order; the
// numeric outcome never depends on the number of workers.
class TaskPool {
public:
    explicit TaskPool(unsigned jobs = default_jobs()) : jobs_(std::max(1u, jobs)) {}

    static unsigned default_jobs() {
        return std::max(1u, std::thread::hardware_concurrency());
    }

    unsigned jobs() const noexcept { return jobs_; }

    template <typename Fn>
    void for_each_index(std::size_t count, Fn&& fn) const {
        if (count == 0) return;
        std::size_t workers = std::min<std::size_t>(jobs_, count);
        if (workers == 1) {
            for (std::size_t i = 0; i < count; ++i) fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(count, std::memory_order_relaxed);
                    return;
                }
            }
        };
        {
            std::vector<std::jthread> threads;
            threads.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);
    }

private:
    unsigned jobs_;
};

}  // namespace tilecensus
