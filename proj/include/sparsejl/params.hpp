#pragma once

#include <cstdint>

#include "sparsejl/types.hpp"

// Resolution of the asymptotic embedding parameters into concrete integers.
// All logarithms are natural; the calibrated leading constants absorb the
// base. Target dimension m is always rounded UP to a multiple of the column
// sparsity s so the block construction has equal blocks, and s is clamped to
// m first (the clamped flag records when that fired).

namespace sparsejl::params {

struct EmbeddingPlan {
  uint64_t n = 0;  // point-set size the plan was resolved for
  uint64_t d = 0;  // ambient dimension
  double eps = 0.0;
  double c_m = 1.0;
  double c_s = 1.0;
  uint64_t m = 0;           // target dimension, multiple of s
  uint64_t s = 0;           // nonzeros per column
  uint64_t ell = 0;         // head size used by the diagnostics splits
  uint64_t block_size = 0;  // m / s exactly
  bool clamped = false;     // s hit the s <= m clamp
};

struct SubspacePlan {
  uint64_t k = 0;  // subspace dimension
  double eps = 0.0;
  double c_m = 1.0;
  double c_s = 1.0;
  uint64_t m = 0;
  uint64_t s = 0;
  uint64_t ell = 0;
  uint64_t block_size = 0;
  bool clamped = false;
};

// m = ceil(c_m eps^-2 ln n),
// s = ceil(c_s eps^-1 (ln n/ln(1/eps) + (ln n)^{2/3} (ln d)^{1/3})),
// ell = ceil(min(eps^-1/2, (ln n/ln d)^{2/3})).
EmbeddingPlan plan_jl(uint64_t n, uint64_t d, double eps, double c_m = 1.0, double c_s = 1.0);

// Same shape with k in place of ln n; ell substitutes ln|N+| ~ k ln 8 for
// ln n, mirroring the net-based argument.
SubspacePlan plan_subspace(uint64_t k, double eps, double c_m = 1.0, double c_s = 1.0);

struct Constants {
  double c_m = 1.0;
  double c_s = 1.0;
};

// Smallest grid pair (c_m major, c_s minor, each over {0.25,0.5,1,2,4,8})
// whose Monte Carlo eps-distortion success frequency on a standard random
// dataset reaches target_success. Deterministic given rng_seed; throws
// NoResult when the grid is exhausted.
Constants calibrate_constants(double target_success, uint64_t trial_budget, uint64_t scenario_n,
                              uint64_t scenario_d, double scenario_eps, uint64_t rng_seed);

inline constexpr double kCalibrationGrid[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

}  // namespace sparsejl::params
