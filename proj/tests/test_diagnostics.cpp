#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sparsejl/diagnostics.hpp"
#include "sparsejl/parallel.hpp"
#include "sparsejl/prng.hpp"
#include "sparsejl/vectors.hpp"

using namespace sparsejl;
namespace diag = sparsejl::diagnostics;

namespace {

SparseVector unit_e(uint32_t i, uint32_t dim) {
  SparseVector x;
  x.dim = dim;
  x.push(i, 1.0);
  return x;
}

double norm2(const std::vector<double>& y) {
  double acc = 0.0;
  for (double v : y) acc += v * v;
  return acc;
}

// Dense re-evaluation of the all-pairs report, used as the oracle.
diag::DistortionReport dense_report(const sketch::SparseJLMatrix& A, const Dataset& X,
                                    double eps) {
  const DenseMatrix M = sketch::materialize(A);
  diag::DistortionReport rep;
  rep.eps = eps;
  double sum = 0.0;
  for (size_t a = 0; a < X.size(); ++a) {
    for (size_t b = a + 1; b < X.size(); ++b) {
      const SparseVector diff = sub(X.points[a], X.points[b]);
      const double d2 = diff.norm2();
      if (d2 == 0.0) continue;
      const std::vector<double> dd = to_dense(diff);
      double e2 = 0.0;
      for (size_t r = 0; r < M.rows; ++r) {
        double acc = 0.0;
        for (size_t c = 0; c < M.cols; ++c) acc += M.at(r, c) * dd[c];
        e2 += acc * acc;
      }
      const double rel = std::fabs(e2 - d2) / d2;
      ++rep.pair_count;
      sum += rel;
      rep.max_rel_distortion = std::max(rep.max_rel_distortion, rel);
      if (rel > eps) ++rep.violations_at_eps;
    }
  }
  if (rep.pair_count > 0) rep.mean_rel_distortion = sum / rep.pair_count;
  return rep;
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("the origin against a basis vector has zero distortion") {
  // s = 4 keeps 1/sqrt(s) exactly representable, so the column norm is
  // floating-exact and the relative distortion is literally zero.
  const sketch::SparseJLMatrix A = sketch::sample(16, 8, 4, 3);
  Dataset X;
  X.dim = 8;
  SparseVector zero;
  zero.dim = 8;
  X.add(zero);
  X.add(unit_e(3, 8));
  const auto rep = diag::distortion(A, X, 0.5);
  CHECK(rep.pair_count == 1);
  CHECK(rep.max_rel_distortion == 0.0);
  CHECK(rep.violations_at_eps == 0);
}

TEST_CASE("distortion matches the dense oracle") {
  for (int trial = 0; trial < 10; ++trial) {
    const sketch::SparseJLMatrix A = sketch::sample(16, 24, 4, 100 + trial);
    Dataset X;
    X.dim = 24;
    for (int i = 0; i < 12; ++i) X.add(vectors::random_sparse_unit(24, 6, 31, 12 * trial + i));
    const auto fast = diag::distortion(A, X, 0.25);
    const auto slow = dense_report(A, X, 0.25);
    CHECK(fast.pair_count == slow.pair_count);
    CHECK(fast.max_rel_distortion == doctest::Approx(slow.max_rel_distortion).epsilon(1e-10));
    CHECK(fast.mean_rel_distortion == doctest::Approx(slow.mean_rel_distortion).epsilon(1e-10));
    CHECK(fast.violations_at_eps == slow.violations_at_eps);
  }
}

TEST_CASE("duplicate-only datasets evaluate no pairs") {
  const sketch::SparseJLMatrix A = sketch::sample(8, 4, 2, 1);
  Dataset X;
  X.dim = 4;
  X.add(unit_e(1, 4));
  X.add(unit_e(1, 4));
  X.add(unit_e(1, 4));
  const auto rep = diag::distortion(A, X, 0.5);
  CHECK(rep.pair_count == 0);
  CHECK(rep.max_rel_distortion == 0.0);

  Dataset tiny;
  tiny.dim = 4;
  tiny.add(unit_e(0, 4));
  CHECK_THROWS_AS(diag::distortion(A, tiny, 0.5), Error);
}

TEST_CASE("relative distortion is scale invariant") {
  const sketch::SparseJLMatrix A = sketch::sample(24, 32, 4, 9);
  Dataset X;
  X.dim = 32;
  for (int i = 0; i < 10; ++i) X.add(vectors::random_sparse_unit(32, 8, 41, i));
  Dataset Xs;
  Xs.dim = 32;
  for (const auto& p : X.points) Xs.add(scaled(p, 3.0));
  const auto a = diag::distortion(A, X, 0.25);
  const auto b = diag::distortion(A, Xs, 0.25);
  CHECK(a.pair_count == b.pair_count);
  CHECK(a.max_rel_distortion == doctest::Approx(b.max_rel_distortion).epsilon(1e-9));
  CHECK(a.mean_rel_distortion == doctest::Approx(b.mean_rel_distortion).epsilon(1e-9));
}

TEST_CASE("pair reports are identical across thread counts") {
  const sketch::SparseJLMatrix A = sketch::sample(32, 64, 8, 10);
  Dataset X;
  X.dim = 64;
  for (int i = 0; i < 40; ++i) X.add(vectors::random_sparse_unit(64, 8, 51, i));
  par::set_threads(1);
  const auto serial = diag::distortion(A, X, 0.25);
  par::set_threads(4);
  const auto parallel = diag::distortion(A, X, 0.25);
  par::set_threads(0);
  CHECK(serial.max_rel_distortion == parallel.max_rel_distortion);
  CHECK(serial.mean_rel_distortion == parallel.mean_rel_distortion);
  CHECK(serial.violations_at_eps == parallel.violations_at_eps);
}

TEST_CASE("sampled mode evaluates the requested budget") {
  const sketch::SparseJLMatrix A = sketch::sample(16, 32, 4, 2);
  Dataset X;
  X.dim = 32;
  for (int i = 0; i < 30; ++i) X.add(vectors::random_sparse_unit(32, 4, 61, i));
  diag::DistortionMode mode;
  mode.kind = diag::PairMode::Sampled;
  mode.pair_budget = 64;
  mode.seed = 5;
  const auto rep = diag::distortion(A, X, 0.25, mode);
  CHECK(rep.pair_count == 64);  // all points distinct, nothing skipped
  const auto rep2 = diag::distortion(A, X, 0.25, mode);
  CHECK(rep.max_rel_distortion == rep2.max_rel_distortion);
}

TEST_CASE("per-pair dump lines match the report") {
  const sketch::SparseJLMatrix A = sketch::sample(8, 8, 2, 4);
  Dataset X;
  X.dim = 8;
  for (int i = 0; i < 5; ++i) X.add(vectors::random_sparse_unit(8, 3, 71, i));
  std::ostringstream dump;
  const auto rep = diag::distortion(A, X, 0.25, {}, &dump);
  size_t lines = 0;
  std::string line;
  std::istringstream in(dump.str());
  double max_seen = 0.0;
  while (std::getline(in, line)) {
    ++lines;
    const size_t last = line.rfind(',');
    max_seen = std::max(max_seen, std::stod(line.substr(last + 1)));
  }
  CHECK(lines == rep.pair_count);
  CHECK(max_seen == doctest::Approx(rep.max_rel_distortion).epsilon(1e-12));
}

TEST_CASE("monte carlo success frequency behaves") {
  Dataset X;
  X.dim = 16;
  X.add(unit_e(0, 16));
  X.add(unit_e(1, 16));

  params::EmbeddingPlan plan = params::plan_jl(64, 16, 0.999);
  SUBCASE("single trial is 0 or 1") {
    const double f = diag::monte_carlo_success(plan, X, 1, 7);
    CHECK((f == 0.0 || f == 1.0));
  }
  SUBCASE("saturates at huge m") {
    plan.m = 64 * plan.m;
    plan.m = ((plan.m + plan.s - 1) / plan.s) * plan.s;
    plan.block_size = plan.m / plan.s;
    CHECK(diag::monte_carlo_success(plan, X, 10, 7) == 1.0);
  }
}

TEST_CASE("success frequency grows with m") {
  Dataset X;
  X.dim = 64;
  for (int i = 0; i < 24; ++i) X.add(vectors::random_sparse_unit(64, 8, 81, i));
  params::EmbeddingPlan plan = params::plan_jl(24, 64, 0.3);
  double prev = -0.05;
  for (int scale = 1; scale <= 4; scale *= 2) {
    params::EmbeddingPlan p = plan;
    p.m = plan.m * scale;
    p.m = ((p.m + p.s - 1) / p.s) * p.s;
    p.block_size = p.m / p.s;
    const double f = diag::monte_carlo_success(p, X, 100, 99);
    CHECK(f >= prev - 0.05);
    prev = f;
  }
}

TEST_CASE("monte_carlo_at_least agrees with the frequency") {
  Dataset X;
  X.dim = 32;
  for (int i = 0; i < 16; ++i) X.add(vectors::random_sparse_unit(32, 8, 91, i));
  const params::EmbeddingPlan plan = params::plan_jl(16, 32, 0.4);
  const double f = diag::monte_carlo_success(plan, X, 60, 5);
  const uint64_t successes = static_cast<uint64_t>(std::llround(f * 60));
  CHECK(diag::monte_carlo_at_least(plan, X, 60, 5, successes));
  if (successes < 60) CHECK(!diag::monte_carlo_at_least(plan, X, 60, 5, successes + 1));
}

TEST_CASE("well_behaved counts exactly") {
  // Fewer than 6 columns can never produce a bad row.
  const sketch::SparseJLMatrix A = sketch::sample(16, 16, 4, 12);
  const auto rep = diag::well_behaved(A, {0, 1, 2, 3, 4}, 1024, 0.25);
  CHECK(rep.bad_row_count == 0);
  CHECK(rep.is_well_behaved);

  // Exact cross-check against a materialized row scan.
  for (int trial = 0; trial < 20; ++trial) {
    const sketch::SparseJLMatrix B = sketch::sample(12, 10, 6, 200 + trial);
    std::vector<uint32_t> J{0, 2, 3, 5, 7, 8, 9};
    const DenseMatrix M = sketch::materialize(B);
    uint64_t bad = 0;
    for (size_t r = 0; r < M.rows; ++r) {
      int nz = 0;
      for (uint32_t j : J)
        if (M.at(r, j) != 0.0) ++nz;
      if (nz >= 6) ++bad;
    }
    const auto wb = diag::well_behaved(B, J, 1 << 20, 0.25);
    CHECK(wb.bad_row_count == bad);
    CHECK(wb.threshold ==
          doctest::Approx(6.0 * std::log(static_cast<double>(1 << 20)) / std::log(4.0)));
  }
}

TEST_CASE("single-block enumeration matches the sampled bad-row frequency") {
  // m=2, s=1, |J|=6: a bad row needs all six columns in the same row, which
  // happens for 2 of the 2^6 equally likely placements.
  const double analytic = 2.0 / 64.0;
  int bad = 0;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    const sketch::SparseJLMatrix A = sketch::sample(2, 6, 1, seed);
    const auto rep = diag::well_behaved(A, {0, 1, 2, 3, 4, 5}, 4, 0.5);
    if (rep.bad_row_count > 0) ++bad;
  }
  const double freq = bad / static_cast<double>(trials);
  const double sigma = std::sqrt(analytic * (1 - analytic) / trials);
  CHECK(std::fabs(freq - analytic) <= 4.0 * sigma);
}

TEST_CASE("well-behavedness holds nearly always at claim parameters") {
  // Needs ell >= 6 to be non-vacuous and s <= eps m for the claim regime.
  const params::EmbeddingPlan plan = params::plan_jl(uint64_t{1} << 60, 16, 1.0 / 36.0);
  REQUIRE(plan.ell >= 6);
  REQUIRE(static_cast<double>(plan.s) <= plan.eps * static_cast<double>(plan.m));
  int not_wb = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const sketch::SparseJLMatrix A(plan.m, 16, plan.s, rng::derive_seed(31, t));
    rng::Stream rs(t, 3);
    std::vector<uint32_t> J;
    while (J.size() < 6) {
      const uint32_t c = static_cast<uint32_t>(rs.below(16));
      if (std::find(J.begin(), J.end(), c) == J.end()) J.push_back(c);
    }
    if (!diag::well_behaved(A, J, plan.n, plan.eps).is_well_behaved) ++not_wb;
  }
  CHECK(not_wb <= 10);  // <= 0.01 observed failure
}

TEST_CASE("head image profile trivial cases") {
  const sketch::SparseJLMatrix A = sketch::sample(32, 16, 4, 8);
  const auto prof = diag::head_image_profile(A, unit_e(5, 16), 1024, 0.25);
  CHECK(prof.exceed_count == 0);
  CHECK(prof.max_abs == A.scale());
  CHECK(prof.bounds_checked);
  CHECK(prof.bounds_hold);

  SparseVector zero;
  zero.dim = 16;
  const auto zprof = diag::head_image_profile(A, zero, 1024, 0.25);
  CHECK(zprof.exceed_count == 0);
  CHECK(zprof.max_abs == 0.0);
  CHECK(zprof.bounds_hold);

  // Oversized head: computed but not checked.
  const auto big = diag::head_image_profile(A, scaled(unit_e(5, 16), 3.0), 1024, 0.25);
  CHECK(!big.head_norm_ok);
  CHECK(!big.bounds_checked);
}

TEST_CASE("conditional head bounds never fail when checked") {
  const params::EmbeddingPlan plan = params::plan_jl(uint64_t{1} << 16, 1 << 10, 0.25, 4.0, 1.0);
  uint64_t checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const sketch::SparseJLMatrix A(plan.m, 1 << 10, plan.s, rng::derive_seed(17, t));
    const SparseVector head = vectors::random_sparse_unit(1 << 10, 4, 19, t);
    const auto prof = diag::head_image_profile(A, head, plan.n, plan.eps);
    if (prof.bounds_checked) {
      ++checked;
      CHECK(prof.bounds_hold);
    }
  }
  CHECK(checked > 900);  // well-behavedness is the typical case
}

TEST_CASE("cross_term basics") {
  const sketch::SparseJLMatrix A = sketch::sample(8, 8, 2, 6);
  SplitVector split;
  split.head = unit_e(0, 8);
  split.tail.dim = 8;
  CHECK(diag::cross_term(A, split) == 0.0);

  SplitVector overlap;
  overlap.head = unit_e(0, 8);
  overlap.tail = unit_e(0, 8);
  CHECK_THROWS_AS(diag::cross_term(A, overlap), Error);
}

TEST_CASE("disjoint image supports give an exactly zero cross term") {
  // m=2, s=1: find a seed placing column 0 in row 0 and column 1 in row 1.
  uint64_t found = UINT64_MAX;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    const sketch::SparseJLMatrix A = sketch::sample(2, 2, 1, seed);
    if (A.row(0, 0) == 0 && A.row(1, 0) == 1) {
      found = seed;
      break;
    }
  }
  REQUIRE(found != UINT64_MAX);
  const sketch::SparseJLMatrix A = sketch::sample(2, 2, 1, found);
  SplitVector split;
  split.head = unit_e(0, 2);
  split.tail = unit_e(1, 2);
  CHECK(diag::cross_term(A, split) == 0.0);
}

TEST_CASE("cross terms stay below eps at plan parameters") {
  const params::EmbeddingPlan plan = params::plan_jl(uint64_t{1} << 16, 1 << 10, 0.25, 4.0, 1.0);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const sketch::SparseJLMatrix A(plan.m, 1 << 10, plan.s, rng::derive_seed(23, t));
    const SparseVector x = vectors::random_sparse_unit(1 << 10, 32, 29, t);
    const SplitVector split = vectors::split_top(x, plan.ell);
    const double head2 = norm2(sketch::apply_sparse(A, split.head));
    const double cross = diag::cross_term(A, split);
    if (!(head2 > 2.0 || std::fabs(cross) < plan.eps)) ++violations;
  }
  CHECK(violations <= 10);
}

TEST_CASE("tail admissibility") {
  // Default constants leave m eps^2 below ln(1/delta): the guard rejects.
  const params::EmbeddingPlan p1 = params::plan_jl(uint64_t{1} << 16, 1 << 10, 0.25);
  SparseVector uniform;
  uniform.dim = 64;
  for (uint32_t i = 0; i < 64; ++i) uniform.push(i, 0.125);
  const double delta = 1.0 / (65536.0 * 65536.0);
  CHECK(!diag::tail_admissible(uniform, p1, delta));

  // With c_m = 4 the bound evaluates to ~0.78; a spread tail passes.
  const params::EmbeddingPlan p4 = params::plan_jl(uint64_t{1} << 16, 1 << 10, 0.25, 4.0, 1.0);
  CHECK(diag::tail_admissible(uniform, p4, delta));

  // e_1 with a tiny plan: ratio 1 exceeds any bound the guard lets through.
  params::EmbeddingPlan tiny;
  tiny.m = 4;
  tiny.s = 1;
  tiny.eps = 0.1;
  CHECK(!diag::tail_admissible(unit_e(0, 4), tiny, 0.5));

  // Scale invariance of the predicate.
  CHECK(diag::tail_admissible(uniform, p4, delta) ==
        diag::tail_admissible(scaled(uniform, 2.0), p4, delta));

  SparseVector zero;
  zero.dim = 4;
  CHECK_THROWS_AS(diag::tail_admissible(zero, p4, 0.5), Error);
}

TEST_CASE("decomposition identity holds to 1e-10") {
  for (int t = 0; t < 1000; ++t) {
    rng::Stream rs(t, 6);
    const uint64_t s = 1 + rs.below(8);
    const uint64_t m = s * (1 + rs.below(16));
    const sketch::SparseJLMatrix A(m, 128, s, rng::derive_seed(37, t));
    const SparseVector x = vectors::random_sparse_unit(128, 16, 41, t);
    const SplitVector split = vectors::split_top(x, 1 + rs.below(6));
    const std::vector<double> yh = sketch::apply_sparse(A, split.head);
    const std::vector<double> yt = sketch::apply_sparse(A, split.tail);
    double cross = 0.0;
    for (size_t r = 0; r < yh.size(); ++r) cross += yh[r] * yt[r];
    const double whole = norm2(sketch::apply_sparse(A, x));
    CHECK(std::fabs(whole - (norm2(yh) + norm2(yt) + 2.0 * cross)) <= 1e-10);
  }
}

TEST_CASE("battery produces consistent bits and is thread independent") {
  Dataset X;
  X.dim = 256;
  for (int i = 0; i < 20; ++i) X.add(vectors::random_sparse_unit(256, 16, 101, i));
  const params::EmbeddingPlan plan = params::plan_jl(uint64_t{1} << 16, 256, 0.25, 4.0, 1.0);

  par::set_threads(1);
  const auto a = diag::run_battery(plan, X, 50, 13);
  par::set_threads(4);
  const auto b = diag::run_battery(plan, X, 50, 13);
  par::set_threads(0);

  CHECK(a.evaluations == 50 * 20);
  CHECK(a.e1_frequency == b.e1_frequency);
  CHECK(a.e2_frequency == b.e2_frequency);
  CHECK(a.e3_frequency == b.e3_frequency);
  CHECK(a.wb_frequency == b.wb_frequency);
  CHECK(a.identity_max_residual == b.identity_max_residual);
  CHECK(a.identity_pass);
  CHECK(a.head_pass);
  CHECK(a.pass == b.pass);
}

TEST_SUITE_END();
