#include "vfi/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace vfi {

namespace {

int hardware_default() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::atomic<int> g_threads{0};  // 0 = use hardware default

}  // namespace

void set_num_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int num_threads() {
  int n = g_threads.load();
  return n == 0 ? hardware_default() : n;
}

void parallel_chunks(int count, const std::function<void(int, int)>& fn) {
  if (count <= 0) return;
  int workers = std::min(num_threads(), count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  // Fixed partition: chunk i covers [i*base + min(i, rem), ...); the split
  // depends only on (count, workers), never on scheduling.
  int base = count / workers;
  int rem = count % workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  int begin = 0;
  for (int i = 0; i < workers; ++i) {
    int len = base + (i < rem ? 1 : 0);
    int end = begin + len;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    begin = end;
  }
  for (auto& th : pool) th.join();
}

}  // namespace vfi
