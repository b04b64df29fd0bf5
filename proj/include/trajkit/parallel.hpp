#pragma once

#include <cstddef>
#include <functional>

namespace trajkit {

// Process-wide cap on worker threads; 0 selects the hardware concurrency.
void set_workers(std::size_t workers);
std::size_t workers();

// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
// visited exactly once, so results written per index are independent of the
// worker count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace trajkit
