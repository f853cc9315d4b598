#pragma once

#include <functional>

namespace hybridpf {

/// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `threads`
/// worker threads. With threads <= 1 the call happens inline. Chunks are
/// disjoint, so results are identical for any thread count as long as fn
/// only touches state indexed by its own range. Exceptions thrown inside
/// workers are rethrown on the calling thread.
void parallel_for(int n, int threads, const std::function<void(int, int)>& fn);

/// Worker-thread cap from the HYBRIDPF_THREADS environment variable,
/// or a default of 1 when unset/invalid.
int env_thread_cap();

} // namespace hybridpf
