#include "weld/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace weld {

std::size_t thread_cap() {
    if (const char* env = std::getenv("WELD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void run_parallel_tasks(std::size_t n_tasks, std::size_t workers,
                        const std::function<void(std::size_t)>& fn) {
    if (n_tasks == 0) return;
    workers = std::min(workers, n_tasks);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t omp_per_worker = std::max<std::size_t>(1, thread_cap() / workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
#ifdef _OPENMP
            omp_set_num_threads(static_cast<int>(omp_per_worker));
#endif
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_tasks) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace weld
