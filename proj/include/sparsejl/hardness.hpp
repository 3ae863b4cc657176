#pragma once

#include <cstdint>
#include <vector>

#include "sparsejl/sketch.hpp"
#include "sparsejl/types.hpp"

// Lower-bound experiment kit: the hard input instance made of uniform
// ell-subset indicator vectors plus the standard basis and the origin,
// brute-force verification of the heavy-subset counting lemma, column
// signature grouping, and the sparsity sweep exhibiting the failure of
// too-sparse embeddings on that instance.

namespace sparsejl::hardness {

// Fixed point of ell = ln n / ln(e d / ell), iterated from 1 and rounded to
// the nearest integer >= 1. Divergence (ell reaching d) is an error.
uint64_t solve_ell(uint64_t n, uint64_t d);

// The real-valued fixed point, for residual checks.
double solve_ell_real(uint64_t n, uint64_t d);

struct HardInstance {
  uint64_t d = 0;
  uint64_t ell = 0;
  std::vector<std::vector<uint32_t>> subsets;  // each of size ell, ascending
  bool includes_basis = true;
  bool includes_origin = true;
  uint64_t dedup_dropped = 0;  // ell=1 subset vectors colliding with basis vectors

  // Materializes the dataset: subset vectors, then e_1..e_d, then 0.
  Dataset to_dataset() const;
  uint64_t size() const noexcept {
    return subsets.size() + (includes_basis ? d : 0) + (includes_origin ? 1 : 0);
  }
};

// ell = solve_ell(n_target, d); all ell-subsets in lexicographic order when
// they fit under cap - d - 1, otherwise that many distinct subsets sampled
// uniformly. Requires cap >= d + 1.
HardInstance generate(uint64_t n_target, uint64_t d, uint64_t cap, uint64_t seed);

struct HeavySubsetCount {
  uint64_t count = 0;      // subsets T of size t with sum_{i in T} v_i^2 >= t ||v||^2 / (2s)
  int64_t bound = 0;       // floor(min(C(m-1,t-1), (s/(8t))^t))
  bool hypothesis_ok = true;  // t <= s/8; when violated the bound is vacuous (< 1)
};

// Exhaustive count over all C(m,t) subsets; guarded at C(m,t) <= 1e7.
// Requires nnz(v) <= s <= m/2. The returned count never falls below the
// bound; a violation would be an implementation bug.
HeavySubsetCount count_heavy_subsets(const std::vector<double>& v, uint64_t s, uint64_t t);

struct SignatureGroup {
  std::vector<uint32_t> rows;   // T, ascending
  std::vector<int8_t> signs;    // sign pattern over T, in row order
  std::vector<uint32_t> columns;
};

// Groups columns by identical size-t (rows, signs) signature over every
// size-t subset of their s nonzero rows; sorted by descending group size.
// Guarded at d * C(s,t) <= 1e7. Group sizes sum to d * C(s,t).
std::vector<SignatureGroup> signature_groups(const sketch::SparseJLMatrix& A, uint64_t t);

struct SweepRow {
  uint64_t s = 0;
  uint64_t m = 0;  // ceil(eps^-2 ln n_target), rounded up to a multiple of s
  double success_frequency = 0.0;
};

// Success frequency of eps-distortion on the hard instance for each sparsity,
// at the uncalibrated target dimension. Deterministic given seed.
std::vector<SweepRow> empirical_lower_bound(uint64_t d, uint64_t n_target, double eps,
                                            const std::vector<uint64_t>& s_values,
                                            uint64_t trials, uint64_t seed, uint64_t cap);

// One count_heavy_subsets run per trial on a random vector with exactly s
// nonzeros (uniform support, gaussian values). Deterministic given seed.
std::vector<HeavySubsetCount> verify_lemma7(uint64_t m, uint64_t s, uint64_t t, uint64_t trials,
                                            uint64_t seed);

// Suggested signature size with the vanishing term dropped:
// lg(eps d / ell) / lg(m / s). Advisory output for the CLI.
double suggested_t(uint64_t d, double eps, uint64_t ell, uint64_t m, uint64_t s);

}  // namespace sparsejl::hardness
