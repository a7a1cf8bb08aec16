#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lrbound {

// Worker cap from LRBOUND_THREADS; 0 or unset means hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("LRBOUND_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Index-based parallel for.  Results must be written to per-index slots so
// output is deterministic regardless of scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  int workers = worker_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<std::size_t>(workers, count);
  pool.reserve(spawn);
  for (int w = 0; w < spawn - 1; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace lrbound
