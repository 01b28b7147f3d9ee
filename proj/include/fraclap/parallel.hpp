#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fraclap {

/// Worker count used when none is given: FRACLAP_JOBS if set, otherwise the
/// hardware concurrency. setDefaultJobs overrides both (0 restores them).
int defaultJobs();
void setDefaultJobs(int jobs);

/// Runs body(i) for i in [0, n). Each index writes only its own outputs, so
/// results do not depend on scheduling. The first exception is rethrown.
template <class F>
void parallelFor(std::size_t n, F&& body, int jobs = defaultJobs()) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace fraclap
