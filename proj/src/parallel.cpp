#include "gridtomo/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace gridtomo {

unsigned worker_count(bool deterministic) {
  if (deterministic) return 1;
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRIDTOMO_THREADS")) {
    unsigned cap = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && cap > 0) n = std::min(n, cap);
  }
  return n;
}

}  // namespace gridtomo
