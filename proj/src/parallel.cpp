#include "sparsejl/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace sparsejl::par {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_threads(unsigned n) noexcept { g_threads.store(n); }

unsigned threads() noexcept {
  unsigned n = g_threads.load();
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  return n;
}

void for_blocks(size_t count, size_t grain,
                const std::function<void(size_t, size_t, size_t)>& fn) {
  if (count == 0) return;
  if (grain == 0) grain = 1;
  const size_t nblocks = block_count(count, grain);
  const unsigned nthreads = std::min<size_t>(threads(), nblocks);

  auto run_block = [&](size_t b) {
    const size_t lo = b * grain;
    const size_t hi = std::min(lo + grain, count);
    fn(b, lo, hi);
  };

  if (nthreads <= 1) {
    for (size_t b = 0; b < nblocks; ++b) run_block(b);
    return;
  }

  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        run_block(b);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace sparsejl::par
