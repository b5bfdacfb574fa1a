#include "willmore/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace willmore {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(thread_count());
  if (workers <= 1 || n < 2 * workers) {
    body(0, n);
    return;
  }
  const std::size_t block = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t begin = 0; begin < n; begin += block) {
    pool.emplace_back(body, begin, std::min(n, begin + block));
  }
  for (auto& t : pool) t.join();
}

}  // namespace willmore
