#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sf {

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Run fn(begin, end) over a disjoint chunking of [0, count).
inline void parallel_chunks(int64_t count, int jobs,
                            const std::function<void(int64_t, int64_t)>& fn) {
  jobs = resolve_jobs(jobs);
  if (count <= 0) return;
  if (jobs == 1 || count < 2 * jobs) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> workers;
  const int64_t chunk = (count + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    const int64_t lo = w * chunk;
    if (lo >= count) break;
    const int64_t hi = std::min<int64_t>(count, lo + chunk);
    workers.emplace_back(fn, lo, hi);
  }
  for (auto& t : workers) t.join();
}

}  // namespace sf
