#pragma once

#include <cstddef>
#include <functional>

namespace fockbarrier {

/// Worker count used by parallel_for; 0 selects hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) for each. Chunk boundaries depend only on n and the
/// thread count; callers write into per-index slots and reduce serially so
/// results are identical for any thread count. The first exception thrown by
/// a worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fockbarrier
