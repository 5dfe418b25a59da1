#pragma once

#include <cstddef>
#include <functional>

namespace plasmon {

/// Worker cap: an explicit override if set, else PLASMON_SIM_THREADS, else
/// the hardware concurrency. Throws ConfigError on a malformed variable.
std::size_t worker_count();

/// 0 clears the override.
void set_worker_count(std::size_t workers);

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; results must be written to per-index slots so the
/// outcome does not depend on scheduling. Rethrows the exception of the
/// lowest failing index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace plasmon
