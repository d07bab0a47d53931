#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace risread {

// Run fn(i) for i in [0,n). Work is claimed in fixed-size blocks through an
// atomic cursor; fn must write only to its own slot i so the result layout is
// independent of the worker count.
inline void parallel_for(uint64_t n, int workers,
                         const std::function<void(uint64_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const uint64_t block = std::max<uint64_t>(1, n / (16 * workers));
  std::atomic<uint64_t> cursor{0};
  auto drain = [&] {
    for (;;) {
      const uint64_t base = cursor.fetch_add(block);
      if (base >= n) return;
      const uint64_t stop = std::min(n, base + block);
      for (uint64_t i = base; i < stop; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// CSV helper: joins already-formatted fields, appends '\n'.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace risread
