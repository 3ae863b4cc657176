#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "sparsejl/params.hpp"
#include "sparsejl/sketch.hpp"
#include "sparsejl/types.hpp"

// Empirical verification surface: relative squared-distance distortion
// reports, Monte Carlo success estimation, and checkable predicates mirroring
// the analysis (well-behaved column sets, head-image bounds, cross terms,
// the l_inf/l_2 tail-admissibility condition).
//
// Probability statements are verified as frequency bounds with fixed trial
// budgets and generous slack; Monte Carlo cannot certify exponents.

namespace sparsejl::diagnostics {

enum class PairMode { AllPairs, Sampled };

struct DistortionMode {
  PairMode kind = PairMode::AllPairs;
  uint64_t pair_budget = 0;  // sampled mode only
  uint64_t seed = 0;         // sampled mode only
};

// All-pairs evaluation is capped; beyond the cap sampled mode is forced and
// the report flags it.
inline constexpr uint64_t kAllPairsCap = 2000000;

struct DistortionReport {
  uint64_t pair_count = 0;
  double max_rel_distortion = 0.0;   // max |  ||Au-Av||^2 - ||u-v||^2 | / ||u-v||^2
  double mean_rel_distortion = 0.0;
  uint64_t violations_at_eps = 0;
  double eps = 0.0;
  DistortionMode mode;        // what actually ran
  bool forced_sampled = false;
};

// Relative squared-distance distortion of A over the pairs of X. Identical
// pairs are skipped; a dataset of fewer than 2 points is an error. When
// dump is non-null one CSV line "i,j,true_d2,embedded_d2,rel" is written per
// evaluated pair (this path runs single-threaded).
DistortionReport distortion(const sketch::SparseJLMatrix& A, const Dataset& X, double eps,
                            DistortionMode mode = {}, std::ostream* dump = nullptr);

// Fraction of trials whose all-pairs distortion report satisfies
// max <= plan.eps, over matrices sampled with counter-derived seeds.
// Deterministic given seed, independent of parallelism.
double monte_carlo_success(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                           uint64_t seed);

// True iff the success count over the same trials reaches `needed`. May stop
// as soon as the outcome is decided; the decision equals
// monte_carlo_success(...) * trials >= needed exactly.
bool monte_carlo_at_least(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                          uint64_t seed, uint64_t needed);

struct WellBehavedReport {
  uint64_t bad_row_count = 0;  // rows with >= 6 nonzeros among the columns J
  double threshold = 0.0;      // 6 ln n / ln(1/eps)
  bool is_well_behaved = false;
};

WellBehavedReport well_behaved(const sketch::SparseJLMatrix& A, const std::vector<uint32_t>& J,
                               uint64_t n, double eps);

struct HeadImageProfile {
  uint64_t exceed_count = 0;  // entries of A x_head above sqrt(5/s)
  double max_abs = 0.0;
  bool head_norm_ok = true;    // ||x_head|| <= 1; computed either way
  bool bounds_checked = false; // support well-behaved and head norm ok
  bool bounds_hold = false;    // conditional bounds, when checked
};

// Profiles A x_head against the conditional bounds: when supp(x_head) is
// well-behaved, at most 6 ln n/ln(1/eps) entries may exceed sqrt(5/s) and the
// max entry is at most sqrt(nnz(x_head))/sqrt(s).
HeadImageProfile head_image_profile(const sketch::SparseJLMatrix& A, const SparseVector& x_head,
                                    uint64_t n, double eps);

// <A head, A tail>, exact inner product of the two images. The split
// supports must be disjoint.
double cross_term(const sketch::SparseJLMatrix& A, const SplitVector& split);

// ||v||_inf/||v|| <= sqrt(eps s ln(m eps^2/ln(1/delta)) / ln(1/delta)) with
// implied constant 1; returns false when the inner log argument is <= 1.
// A diagnostic predicate, never a correctness gate.
bool tail_admissible(const SparseVector& v, const params::EmbeddingPlan& plan, double delta);

struct BatteryThresholds {
  double min_event_frequency = 0.99;
  double identity_tolerance = 1e-10;
};

struct BatteryReport {
  uint64_t trials = 0;
  uint64_t points = 0;
  uint64_t evaluations = 0;  // trials x usable (nonzero) points
  double e1_frequency = 0.0;  // head norm preserved multiplicatively
  double e2_frequency = 0.0;  // tail norm preserved additively
  double e3_frequency = 0.0;  // cross term below eps (or head image large)
  bool wb_applicable = false;  // requires s <= eps m
  double wb_frequency = 0.0;
  uint64_t head_checked = 0;
  uint64_t head_violations = 0;
  double identity_max_residual = 0.0;
  bool e1_pass = false, e2_pass = false, e3_pass = false, wb_pass = false;
  bool head_pass = false, identity_pass = false, pass = false;
};

// Runs the per-point event battery over sampled matrices: each point of X is
// normalized to unit length, split at plan.ell, and scored against the norm,
// tail, cross-term, well-behavedness and head-profile predicates plus the
// decomposition identity. PASS bits reflect the individual predicates.
BatteryReport run_battery(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                          uint64_t seed, const BatteryThresholds& thresholds = {});

}  // namespace sparsejl::diagnostics
