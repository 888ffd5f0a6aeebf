#pragma once

#include <cstddef>
#include <functional>

namespace fpp {

/// Worker count used when a call passes threads <= 0. Defaults to the
/// hardware concurrency; the CLI overrides it with --threads.
int default_threads();
void set_default_threads(int threads);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
/// into per-index slots so results do not depend on scheduling. The first
/// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace fpp
