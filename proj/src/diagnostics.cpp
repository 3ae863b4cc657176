#include "sparsejl/diagnostics.hpp"

#include <atomic>
#include <cmath>
#include <unordered_map>

#include "sparsejl/parallel.hpp"
#include "sparsejl/prng.hpp"
#include "sparsejl/vectors.hpp"

namespace sparsejl::diagnostics {

namespace {

struct PairTable {
  std::vector<uint32_t> i, j;
  std::vector<double> true_d2;
  size_t size() const noexcept { return true_d2.size(); }
};

double pair_true_d2(const Dataset& X, size_t a, size_t b) {
  const SparseVector diff = sub(X.points[a], X.points[b]);
  return diff.norm2();
}

// Enumerated or sampled candidate pairs with exact squared distances;
// identical pairs are dropped here.
PairTable build_pair_table(const Dataset& X, DistortionMode& mode, bool& forced_sampled) {
  const size_t n = X.size();
  const uint64_t all = static_cast<uint64_t>(n) * (n - 1) / 2;
  forced_sampled = false;
  if (mode.kind == PairMode::AllPairs && all > kAllPairsCap) {
    mode.kind = PairMode::Sampled;
    mode.pair_budget = kAllPairsCap;
    forced_sampled = true;
  }

  PairTable t;
  if (mode.kind == PairMode::AllPairs) {
    t.i.reserve(all);
    t.j.reserve(all);
    t.true_d2.reserve(all);
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = a + 1; b < n; ++b) {
        const double d2 = pair_true_d2(X, a, b);
        if (d2 == 0.0) continue;
        t.i.push_back(static_cast<uint32_t>(a));
        t.j.push_back(static_cast<uint32_t>(b));
        t.true_d2.push_back(d2);
      }
    }
  } else {
    if (mode.pair_budget < 1)
      fail(ErrorCode::InvalidArgument, "distortion: sampled mode needs pair budget >= 1");
    rng::Stream rs(mode.seed, 0);
    for (uint64_t k = 0; k < mode.pair_budget; ++k) {
      const size_t a = rs.below(n);
      size_t b = rs.below(n - 1);
      if (b >= a) ++b;
      const double d2 = pair_true_d2(X, a, b);
      if (d2 == 0.0) continue;
      t.i.push_back(static_cast<uint32_t>(std::min(a, b)));
      t.j.push_back(static_cast<uint32_t>(std::max(a, b)));
      t.true_d2.push_back(d2);
    }
  }
  return t;
}

// Flat row-major embedding of every point.
std::vector<double> embed_all(const sketch::SparseJLMatrix& A, const Dataset& X) {
  const size_t n = X.size();
  const size_t m = A.rows_count();
  std::vector<double> E(n * m);
  par::for_blocks(n, 8, [&](size_t, size_t lo, size_t hi) {
    for (size_t p = lo; p < hi; ++p) {
      const std::vector<double> y = sketch::apply_sparse(A, X.points[p]);
      std::copy(y.begin(), y.end(), E.begin() + p * m);
    }
  });
  return E;
}

double embedded_d2(const double* u, const double* v, size_t m) {
  double acc = 0.0;
  for (size_t r = 0; r < m; ++r) {
    const double diff = u[r] - v[r];
    acc += diff * diff;
  }
  return acc;
}

struct BlockStats {
  double max = 0.0;
  double sum = 0.0;
  uint64_t violations = 0;
};

DistortionReport evaluate(const sketch::SparseJLMatrix& A, const Dataset& X, double eps,
                          const PairTable& table, const DistortionMode& mode, bool forced,
                          std::ostream* dump) {
  const size_t m = A.rows_count();
  const std::vector<double> E = embed_all(A, X);

  DistortionReport rep;
  rep.eps = eps;
  rep.mode = mode;
  rep.forced_sampled = forced;
  rep.pair_count = table.size();
  if (table.size() == 0) return rep;

  auto eval_pair = [&](size_t p) {
    const double d2 = embedded_d2(&E[table.i[p] * m], &E[table.j[p] * m], m);
    return std::fabs(d2 - table.true_d2[p]) / table.true_d2[p];
  };

  if (dump != nullptr) {
    // Streaming dump fixes the evaluation order; runs single-threaded.
    BlockStats st;
    for (size_t p = 0; p < table.size(); ++p) {
      const double d2 = embedded_d2(&E[table.i[p] * m], &E[table.j[p] * m], m);
      const double rel = std::fabs(d2 - table.true_d2[p]) / table.true_d2[p];
      (*dump) << table.i[p] << ',' << table.j[p] << ',' << table.true_d2[p] << ',' << d2 << ','
              << rel << '\n';
      st.max = std::max(st.max, rel);
      st.sum += rel;
      if (rel > eps) ++st.violations;
    }
    rep.max_rel_distortion = st.max;
    rep.mean_rel_distortion = st.sum / static_cast<double>(table.size());
    rep.violations_at_eps = st.violations;
    return rep;
  }

  constexpr size_t kGrain = 4096;
  std::vector<BlockStats> slots(par::block_count(table.size(), kGrain));
  par::for_blocks(table.size(), kGrain, [&](size_t blk, size_t lo, size_t hi) {
    BlockStats st;
    for (size_t p = lo; p < hi; ++p) {
      const double rel = eval_pair(p);
      st.max = std::max(st.max, rel);
      st.sum += rel;
      if (rel > eps) ++st.violations;
    }
    slots[blk] = st;
  });

  double sum = 0.0;
  for (const BlockStats& st : slots) {
    rep.max_rel_distortion = std::max(rep.max_rel_distortion, st.max);
    sum += st.sum;
    rep.violations_at_eps += st.violations;
  }
  rep.mean_rel_distortion = sum / static_cast<double>(table.size());
  return rep;
}

// Success check with early exit; equivalent to max <= eps on the full report.
bool trial_succeeds(const sketch::SparseJLMatrix& A, const Dataset& X, double eps,
                    const PairTable& table) {
  const size_t m = A.rows_count();
  const std::vector<double> E = embed_all(A, X);
  for (size_t p = 0; p < table.size(); ++p) {
    const double d2 = embedded_d2(&E[table.i[p] * m], &E[table.j[p] * m], m);
    if (std::fabs(d2 - table.true_d2[p]) > eps * table.true_d2[p]) return false;
  }
  return true;
}

}  // namespace

DistortionReport distortion(const sketch::SparseJLMatrix& A, const Dataset& X, double eps,
                            DistortionMode mode, std::ostream* dump) {
  if (X.size() < 2) fail(ErrorCode::InvalidArgument, "distortion: dataset needs >= 2 points");
  if (X.dim != A.cols_count())
    fail(ErrorCode::DimensionMismatch, "distortion: dataset dim does not match matrix d");
  bool forced = false;
  DistortionMode actual = mode;
  const PairTable table = build_pair_table(X, actual, forced);
  return evaluate(A, X, eps, table, actual, forced, dump);
}

double monte_carlo_success(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                           uint64_t seed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "monte_carlo_success: trials must be >= 1");
  if (X.size() < 2) fail(ErrorCode::InvalidArgument, "monte_carlo_success: dataset too small");

  DistortionMode mode;  // all-pairs, cap may force sampling
  bool forced = false;
  const PairTable table = build_pair_table(X, mode, forced);

  std::vector<uint8_t> ok(trials, 0);
  par::for_blocks(trials, 1, [&](size_t, size_t lo, size_t hi) {
    for (size_t t = lo; t < hi; ++t) {
      const sketch::SparseJLMatrix A(plan.m, X.dim, plan.s, rng::derive_seed(seed, t));
      ok[t] = trial_succeeds(A, X, plan.eps, table) ? 1 : 0;
    }
  });

  uint64_t succ = 0;
  for (uint8_t v : ok) succ += v;
  return static_cast<double>(succ) / static_cast<double>(trials);
}

bool monte_carlo_at_least(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                          uint64_t seed, uint64_t needed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "monte_carlo_at_least: trials must be >= 1");
  if (needed > trials) return false;
  if (X.size() < 2) fail(ErrorCode::InvalidArgument, "monte_carlo_at_least: dataset too small");

  DistortionMode mode;
  bool forced = false;
  const PairTable table = build_pair_table(X, mode, forced);
  const uint64_t allowed_failures = trials - needed;

  std::atomic<uint64_t> failures{0};
  std::atomic<uint64_t> successes{0};
  par::for_blocks(trials, 1, [&](size_t, size_t lo, size_t hi) {
    for (size_t t = lo; t < hi; ++t) {
      if (failures.load() > allowed_failures || successes.load() >= needed) return;
      const sketch::SparseJLMatrix A(plan.m, X.dim, plan.s, rng::derive_seed(seed, t));
      if (trial_succeeds(A, X, plan.eps, table))
        successes.fetch_add(1);
      else
        failures.fetch_add(1);
    }
  });
  return successes.load() >= needed;
}

WellBehavedReport well_behaved(const sketch::SparseJLMatrix& A, const std::vector<uint32_t>& J,
                               uint64_t n, double eps) {
  if (J.empty()) fail(ErrorCode::InvalidArgument, "well_behaved: empty column set");
  for (uint32_t j : J)
    if (j >= A.cols_count())
      fail(ErrorCode::InvalidArgument, "well_behaved: column index out of range");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidArgument, "well_behaved: eps in (0,1)");

  // Entries of one column sit in distinct blocks, hence distinct rows, so a
  // per-row hit count equals the number of distinct columns touching it.
  std::unordered_map<uint32_t, uint32_t> hits;
  hits.reserve(J.size() * A.sparsity());
  for (uint32_t j : J)
    for (uint64_t b = 0; b < A.sparsity(); ++b) ++hits[A.row(j, b)];

  WellBehavedReport rep;
  rep.threshold = 6.0 * std::log(static_cast<double>(n)) / std::log(1.0 / eps);
  for (const auto& [row, cnt] : hits)
    if (cnt >= 6) ++rep.bad_row_count;
  rep.is_well_behaved = static_cast<double>(rep.bad_row_count) <= rep.threshold;
  return rep;
}

HeadImageProfile head_image_profile(const sketch::SparseJLMatrix& A, const SparseVector& x_head,
                                    uint64_t n, double eps) {
  HeadImageProfile prof;
  prof.head_norm_ok = x_head.norm2() <= 1.0 + 1e-12;

  const std::vector<double> y = sketch::apply_sparse(A, x_head);
  const double exceed_threshold = std::sqrt(5.0) * A.scale();
  for (double v : y) {
    const double a = std::fabs(v);
    prof.max_abs = std::max(prof.max_abs, a);
    if (a > exceed_threshold) ++prof.exceed_count;
  }

  if (x_head.nnz() == 0) {
    prof.bounds_checked = true;
    prof.bounds_hold = true;
    return prof;
  }
  if (!prof.head_norm_ok) return prof;

  const WellBehavedReport wb = well_behaved(A, x_head.idx, n, eps);
  if (!wb.is_well_behaved) return prof;

  prof.bounds_checked = true;
  const double max_bound = std::sqrt(static_cast<double>(x_head.nnz())) * A.scale();
  prof.bounds_hold = static_cast<double>(prof.exceed_count) <= wb.threshold &&
                     prof.max_abs <= max_bound;
  return prof;
}

double cross_term(const sketch::SparseJLMatrix& A, const SplitVector& split) {
  // Supports must be disjoint.
  size_t a = 0, b = 0;
  while (a < split.head.nnz() && b < split.tail.nnz()) {
    if (split.head.idx[a] < split.tail.idx[b])
      ++a;
    else if (split.head.idx[a] > split.tail.idx[b])
      ++b;
    else
      fail(ErrorCode::InvalidArgument, "cross_term: split supports overlap");
  }
  const std::vector<double> u = sketch::apply_sparse(A, split.head);
  const std::vector<double> v = sketch::apply_sparse(A, split.tail);
  double acc = 0.0;
  for (size_t r = 0; r < u.size(); ++r) acc += u[r] * v[r];
  return acc;
}

bool tail_admissible(const SparseVector& v, const params::EmbeddingPlan& plan, double delta) {
  if (v.nnz() == 0) fail(ErrorCode::InvalidArgument, "tail_admissible: zero vector");
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::InvalidArgument, "tail_admissible: delta in (0,1)");
  const double ln_inv_delta = std::log(1.0 / delta);
  const double arg = static_cast<double>(plan.m) * plan.eps * plan.eps / ln_inv_delta;
  if (arg <= 1.0) return false;
  const double bound =
      std::sqrt(plan.eps * static_cast<double>(plan.s) * std::log(arg) / ln_inv_delta);
  return vectors::infty_ratio(v) <= bound;
}

namespace {

struct BatteryCounts {
  uint64_t evals = 0;
  uint64_t e1 = 0, e2 = 0, e3 = 0, wb = 0;
  uint64_t head_checked = 0, head_violations = 0;
  double identity_max = 0.0;
};

double norm2_of(const std::vector<double>& y) {
  double acc = 0.0;
  for (double v : y) acc += v * v;
  return acc;
}

}  // namespace

BatteryReport run_battery(const params::EmbeddingPlan& plan, const Dataset& X, uint64_t trials,
                          uint64_t seed, const BatteryThresholds& thresholds) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "run_battery: trials must be >= 1");
  if (X.size() < 1) fail(ErrorCode::InvalidArgument, "run_battery: empty dataset");

  // Unit-normalize the points once; zero points cannot be scored.
  std::vector<SparseVector> unit;
  unit.reserve(X.size());
  for (const SparseVector& p : X.points)
    if (p.nnz() > 0) unit.push_back(scaled(p, 1.0 / p.norm()));
  if (unit.empty()) fail(ErrorCode::InvalidArgument, "run_battery: all points are zero");

  const double eps = plan.eps;
  std::vector<BatteryCounts> slots(trials);
  par::for_blocks(trials, 1, [&](size_t, size_t lo, size_t hi) {
    for (size_t t = lo; t < hi; ++t) {
      const sketch::SparseJLMatrix A(plan.m, X.dim, plan.s, rng::derive_seed(seed, t));
      BatteryCounts& c = slots[t];
      for (const SparseVector& x : unit) {
        const SplitVector split = vectors::split_top(x, plan.ell);
        const std::vector<double> yh = sketch::apply_sparse(A, split.head);
        const std::vector<double> yt = sketch::apply_sparse(A, split.tail);
        const std::vector<double> yx = sketch::apply_sparse(A, x);
        const double h2 = split.head.norm2();
        const double t2 = split.tail.norm2();
        const double ah2 = norm2_of(yh);
        const double at2 = norm2_of(yt);
        double cross = 0.0;
        for (size_t r = 0; r < yh.size(); ++r) cross += yh[r] * yt[r];

        ++c.evals;
        if (std::fabs(ah2 - h2) <= eps * h2) ++c.e1;
        if (std::fabs(at2 - t2) <= eps) ++c.e2;
        if (ah2 > 2.0 || std::fabs(cross) < eps) ++c.e3;

        const WellBehavedReport wb = well_behaved(A, split.head.idx, plan.n, eps);
        if (wb.is_well_behaved) ++c.wb;

        const HeadImageProfile prof = head_image_profile(A, split.head, plan.n, eps);
        if (prof.bounds_checked) {
          ++c.head_checked;
          if (!prof.bounds_hold) ++c.head_violations;
        }

        const double residual = std::fabs(norm2_of(yx) - (ah2 + at2 + 2.0 * cross));
        c.identity_max = std::max(c.identity_max, residual);
      }
    }
  });

  BatteryCounts total;
  for (const BatteryCounts& c : slots) {
    total.evals += c.evals;
    total.e1 += c.e1;
    total.e2 += c.e2;
    total.e3 += c.e3;
    total.wb += c.wb;
    total.head_checked += c.head_checked;
    total.head_violations += c.head_violations;
    total.identity_max = std::max(total.identity_max, c.identity_max);
  }

  BatteryReport rep;
  rep.trials = trials;
  rep.points = unit.size();
  rep.evaluations = total.evals;
  const double denom = static_cast<double>(total.evals);
  rep.e1_frequency = total.e1 / denom;
  rep.e2_frequency = total.e2 / denom;
  rep.e3_frequency = total.e3 / denom;
  rep.wb_frequency = total.wb / denom;
  rep.wb_applicable = static_cast<double>(plan.s) <= eps * static_cast<double>(plan.m);
  rep.head_checked = total.head_checked;
  rep.head_violations = total.head_violations;
  rep.identity_max_residual = total.identity_max;

  rep.e1_pass = rep.e1_frequency >= thresholds.min_event_frequency;
  rep.e2_pass = rep.e2_frequency >= thresholds.min_event_frequency;
  rep.e3_pass = rep.e3_frequency >= thresholds.min_event_frequency;
  // Claim-level guarantee needs s <= eps m; otherwise report not-applicable.
  rep.wb_pass = !rep.wb_applicable || rep.wb_frequency >= thresholds.min_event_frequency;
  rep.head_pass = rep.head_violations == 0;
  rep.identity_pass = rep.identity_max_residual <= thresholds.identity_tolerance;
  rep.pass = rep.e1_pass && rep.e2_pass && rep.e3_pass && rep.wb_pass && rep.head_pass &&
             rep.identity_pass;
  return rep;
}

}  // namespace sparsejl::diagnostics
