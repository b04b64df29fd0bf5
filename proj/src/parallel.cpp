#include "trajkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trajkit {
namespace {
std::atomic<std::size_t> g_workers{0};
}

void set_workers(std::size_t workers) { g_workers.store(workers); }

std::size_t workers() {
  const std::size_t w = g_workers.load();
  if (w) return w;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t w = std::min(workers(), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t lo = k * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace trajkit
