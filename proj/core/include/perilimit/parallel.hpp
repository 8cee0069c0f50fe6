#pragma once

#include <cstddef>
#include <functional>

namespace perilimit {

/// Caps the number of worker threads used by library loops (>= 1).
void set_thread_limit(int threads);
[[nodiscard]] int thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads.
/// Work is split into contiguous blocks; callers that write body results to
/// per-index slots get results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace perilimit
