#pragma once

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace renarea {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define RENAREA_CHECK(cond, msg)                      \
  do {                                                \
    if (!(cond)) throw ::renarea::Error(msg);         \
  } while (0)

constexpr double kPi = 3.14159265358979323846;

inline int max_threads() {
  if (const char* s = std::getenv("RENAREA_MAX_THREADS")) {
    int n = std::atoi(s);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Deterministic parallel map: workers fill disjoint slots, no shared reductions.
inline void parallel_for(int n, const std::function<void(int)>& body) {
  int nt = std::min(max_threads(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += nt) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace renarea
