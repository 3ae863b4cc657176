#pragma once

#include <cstddef>
#include <functional>

// Deterministic internal parallelism. Work is cut into fixed-size blocks
// whose boundaries do not depend on the thread count; threads pull block ids
// from a shared counter and write per-block results into caller-owned slots.
// Reducing the slots sequentially afterwards therefore yields bit-identical
// results for any thread count, including 1.

namespace sparsejl::par {

// Global worker count. 0 = hardware concurrency. Set once at startup (CLI
// --threads / SPARSEJL_THREADS); not synchronized against running loops.
void set_threads(unsigned n) noexcept;
unsigned threads() noexcept;

// Invokes fn(block_id, begin, end) for every block of at most `grain`
// consecutive indices in [0, count).
void for_blocks(size_t count, size_t grain, const std::function<void(size_t, size_t, size_t)>& fn);

inline size_t block_count(size_t count, size_t grain) { return (count + grain - 1) / grain; }

}  // namespace sparsejl::par
