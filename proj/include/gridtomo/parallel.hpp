#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace gridtomo {

/// Worker count: 1 when deterministic, otherwise hardware concurrency capped
/// by the GRIDTOMO_THREADS environment variable.
unsigned worker_count(bool deterministic);

/// Calls fn(begin, end) over contiguous chunks of [0, n).
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  // Small ranges are not worth a thread.
  constexpr std::size_t kMinChunk = 4096;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n / kMinChunk + 1));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gridtomo
