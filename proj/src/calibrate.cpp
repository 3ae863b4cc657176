#include <algorithm>
#include <cmath>

#include "sparsejl/diagnostics.hpp"
#include "sparsejl/params.hpp"
#include "sparsejl/prng.hpp"
#include "sparsejl/vectors.hpp"

namespace sparsejl::params {

namespace {
// Reserved derivation stream for the scenario dataset; trial streams are the
// small counters, so the two never collide.
constexpr uint64_t kDatasetStream = uint64_t{1} << 63;
constexpr uint32_t kScenarioNnz = 16;
}  // namespace

Constants calibrate_constants(double target_success, uint64_t trial_budget, uint64_t scenario_n,
                              uint64_t scenario_d, double scenario_eps, uint64_t rng_seed) {
  if (!(target_success > 0.0 && target_success < 1.0))
    fail(ErrorCode::InvalidArgument, "calibrate: target_success must lie in (0,1)");
  if (trial_budget < 100)
    fail(ErrorCode::InvalidArgument, "calibrate: trial_budget must be at least 100");

  const Dataset X = vectors::random_sparse_dataset(
      scenario_n, static_cast<uint32_t>(scenario_d),
      std::min<uint32_t>(static_cast<uint32_t>(scenario_d), kScenarioNnz),
      rng::derive_seed(rng_seed, kDatasetStream));

  // Smallest success count whose frequency reaches the target.
  const uint64_t needed = static_cast<uint64_t>(
      std::ceil(target_success * static_cast<double>(trial_budget) - 1e-9));

  for (double c_m : kCalibrationGrid) {
    for (double c_s : kCalibrationGrid) {
      const EmbeddingPlan plan = plan_jl(scenario_n, scenario_d, scenario_eps, c_m, c_s);
      if (diagnostics::monte_carlo_at_least(plan, X, trial_budget, rng_seed, needed))
        return {c_m, c_s};
    }
  }
  fail(ErrorCode::NoResult, "calibrate: no grid point reached the target success");
}

}  // namespace sparsejl::params
