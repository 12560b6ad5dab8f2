#include "vpb/util/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace vpb {

namespace {
int g_threads = std::max(1u, std::thread::hardware_concurrency());
}

void set_threads(int n) { g_threads = std::max(1, n); }
int threads() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int nt = std::min(g_threads, n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace vpb
