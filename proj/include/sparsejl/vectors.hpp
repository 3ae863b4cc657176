#pragma once

#include <cstdint>

#include "sparsejl/types.hpp"

// Vector decompositions used throughout the analysis: the top-ell head/tail
// split and the strict-threshold heavy/light split at 1/sqrt(ell), plus the
// pairwise-difference normalization that reduces distance preservation to
// norm preservation over unit vectors.

namespace sparsejl::vectors {

// head keeps the ell entries of largest magnitude (ties broken by lower
// index); tail = x - head.
SplitVector split_top(const SparseVector& x, uint64_t ell);

// head keeps entries with |value| strictly greater than 1/sqrt(ell);
// for unit x this leaves at most ell of them.
SplitVector split_heavy(const SparseVector& x, uint64_t ell);

// ||x||_inf / ||x||_2. Errors on the zero vector.
double infty_ratio(const SparseVector& x);

struct NormalizedPairs {
  Dataset pairs;         // (x_i - x_j)/||x_i - x_j|| over i < j
  uint64_t skipped = 0;  // identical pairs dropped
};

// All pairwise normalized differences; identical points are skipped and
// counted rather than treated as an error.
NormalizedPairs normalize_pairs(const Dataset& X);

// Random unit vector with exactly min(nnz, d) nonzeros at distinct indices,
// normal values before normalization. Standard input for Monte Carlo checks
// and calibration.
SparseVector random_sparse_unit(uint32_t d, uint32_t nnz, uint64_t seed, uint64_t stream);

Dataset random_sparse_dataset(uint64_t n, uint32_t d, uint32_t nnz, uint64_t seed);

}  // namespace sparsejl::vectors
