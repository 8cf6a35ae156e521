#pragma once

#include <cstddef>
#include <functional>

namespace coarsecyl {

/// Thread cap: min(hardware_concurrency, COARSECYL_THREADS if set).
std::size_t thread_cap();

/// Runs fn(i) for i in [0, count) across worker threads. The work must be
/// independent per index; exceptions propagate from the first failing index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace coarsecyl
