#pragma once

#include <cstddef>
#include <functional>

namespace pacgen {

inline constexpr const char* kWorkersEnv = "PACGEN_WORKERS";

// PACGEN_WORKERS if set to a positive integer, else hardware concurrency.
int default_worker_count();

// Calls task(i) for i in [0, count) on up to `workers` threads. Tasks must
// write only to their own pre-indexed slot. If any task throws, the exception
// of the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace pacgen
