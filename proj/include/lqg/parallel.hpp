#pragma once

#include <functional>

namespace lqg {

/// Number of worker threads: `requested` if positive, else the LQG_THREADS
/// environment variable, else 1.
int resolve_threads(int requested);

/// Runs fn(0..count-1), possibly across threads.  Each index must write only
/// to its own output slot; results are then independent of scheduling, which
/// keeps every Monte-Carlo loop deterministic.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace lqg
