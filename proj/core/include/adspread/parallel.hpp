#pragma once

#include <cstddef>
#include <functional>

namespace adspread {

/// Environment variable that overrides the default worker count.
inline constexpr const char* kWorkersEnv = "ADSPREAD_WORKERS";

/// `requested` if non-zero, else $ADSPREAD_WORKERS, else hardware concurrency.
unsigned resolve_workers(unsigned requested = 0);

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// fn(worker, begin, end) on separate threads. Rethrows the first exception
/// (by worker index) after all workers have joined.
void parallel_chunks(std::size_t count, unsigned workers,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& fn);

}  // namespace adspread
