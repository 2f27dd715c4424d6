#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace carpet {

/// Evaluates fn(i) for i in [0, n) on up to `workers` threads. Results land in index order,
/// so the output does not depend on scheduling. The first exception (lowest index) is rethrown.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, int workers, Fn&& fn) {
  std::vector<Result> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  if (count <= 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < std::min(count, n); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace carpet
