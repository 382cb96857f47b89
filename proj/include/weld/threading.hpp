#pragma once

#include <cstddef>
#include <functional>

namespace weld {

// Global parallelism cap: WELD_THREADS when set, hardware concurrency
// otherwise. Used for both kernel-level OpenMP teams and window-level tasks.
std::size_t thread_cap();

// Runs fn(0..n_tasks) on up to `workers` std::threads. Each worker limits its
// own OpenMP team so the total stays within the cap. Tasks must be
// independent; any exception is rethrown after all workers join.
void run_parallel_tasks(std::size_t n_tasks, std::size_t workers,
                        const std::function<void(std::size_t)>& fn);

}  // namespace weld
