#pragma once

#include <cstddef>
#include <functional>

namespace p2wave {

// Worker count: P2WAVE_THREADS if set and positive, otherwise the hardware concurrency.
int default_threads();

// Runs body(i) for i in [0, n) on up to `threads` workers (0 means default_threads()).
// The first exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace p2wave
