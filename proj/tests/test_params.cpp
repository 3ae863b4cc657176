#include <cmath>

#include "doctest.h"
#include "sparsejl/params.hpp"
#include "sparsejl/prng.hpp"

using namespace sparsejl;
using params::plan_jl;
using params::plan_subspace;

TEST_SUITE_BEGIN("params");

TEST_CASE("plan_jl resolves the large-n small-d example") {
  const auto p = plan_jl(uint64_t{1} << 20, uint64_t{1} << 10, 0.1);
  // ell = ceil(min(10^0.5, (ln 2^20 / ln 2^10)^{2/3})) = ceil(2^{2/3}) = 2
  CHECK(p.ell == 2);
  CHECK(p.m == 1539);
  CHECK(p.s == 171);
  CHECK(p.block_size == 9);
  CHECK(!p.clamped);
}

TEST_CASE("plan_jl clamps s and keeps equal blocks on the tiny example") {
  const auto p = plan_jl(2, 2, 0.5);
  // m = ceil(4 ln 2) = 3; raw s = ceil(2 (1 + ln 2)) = 4 clamps to 3.
  CHECK(p.m == 3);
  CHECK(p.s == 3);
  CHECK(p.clamped);
  CHECK(p.block_size == 1);
  CHECK(p.ell == 1);
}

TEST_CASE("plan_jl rejects degenerate inputs") {
  CHECK_THROWS_AS(plan_jl(1, 4, 0.5), Error);
  CHECK_THROWS_AS(plan_jl(4, 1, 0.5), Error);
  CHECK_THROWS_AS(plan_jl(4, 4, 0.0), Error);
  CHECK_THROWS_AS(plan_jl(4, 4, 1.0), Error);
  CHECK_THROWS_AS(plan_jl(4, 4, -0.1), Error);
  CHECK_THROWS_AS(plan_jl(4, 4, 0.5, 0.0, 1.0), Error);
  CHECK_THROWS_AS(plan_jl(4, 4, 0.5, 1.0, -1.0), Error);
}

TEST_CASE("plan invariants over random inputs") {
  rng::Stream rs(2024, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const uint64_t n = 2 + rs.below(1 << 22);
    const uint64_t d = 2 + rs.below(1 << 22);
    const double eps = 0.02 + 0.96 * rs.uniform();
    const auto p = plan_jl(n, d, eps);
    CHECK(p.s >= 1);
    CHECK(p.s <= p.m);
    CHECK(p.m % p.s == 0);
    CHECK(p.block_size == p.m / p.s);
    CHECK(p.ell >= 1);
    CHECK(p.ell <= static_cast<uint64_t>(std::ceil(1.0 / std::sqrt(eps))));
  }
}

TEST_CASE("sparsity is monotone in d, n and 1/eps") {
  rng::Stream rs(55, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const uint64_t n = 4 + rs.below(1 << 20);
    const uint64_t d1 = 2 + rs.below(1 << 18);
    const uint64_t d2 = d1 + rs.below(1 << 18);
    const double eps = 0.05 + 0.9 * rs.uniform();
    CHECK(plan_jl(n, d1, eps).s <= plan_jl(n, d2, eps).s);
    CHECK(plan_jl(n, d1, eps).s <= plan_jl(n + n, d1, eps).s);
    CHECK(plan_jl(n, d1, eps).s <= plan_jl(n, d1, eps / 2).s);
  }
}

TEST_CASE("the d-aware term follows the formula exactly, also for d >= n") {
  rng::Stream rs(77, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const uint64_t n = 2 + rs.below(4096);
    const uint64_t d = n + rs.below(1 << 20);  // d >= n regime
    const double eps = 0.05 + 0.9 * rs.uniform();
    const auto p = plan_jl(n, d, eps);
    // Independent recomputation through a different expression path.
    const double ln_n = std::log(static_cast<double>(n));
    const double ln_d = std::log(static_cast<double>(d));
    const double raw =
        (1.0 / eps) * (ln_n / std::log(1.0 / eps) +
                       std::exp((2.0 * std::log(ln_n) + std::log(ln_d)) / 3.0));
    uint64_t expect = static_cast<uint64_t>(std::ceil(raw));
    if (expect < 1) expect = 1;
    const uint64_t m_raw = static_cast<uint64_t>(std::ceil(ln_n / (eps * eps)));
    expect = std::min(expect, std::max<uint64_t>(m_raw, 1));
    // Both evaluations agree except when raw sits within an ulp of an integer.
    const bool boundary = std::fabs(raw - std::floor(raw)) < 1e-9 ||
                          std::fabs(raw - std::ceil(raw)) < 1e-9;
    if (!boundary) CHECK(p.s == expect);
  }
}

TEST_CASE("plan_subspace resolves the k=8 example") {
  const auto p = plan_subspace(8, 0.5);
  CHECK(p.m == 32);
  CHECK(p.s == 32);  // clamped: raw s = 34 exceeds m
  CHECK(p.clamped);
  CHECK(p.ell == 2);
}

TEST_CASE("plan_subspace succeeds at the smallest k") {
  const auto p = plan_subspace(2, 0.5);
  CHECK(p.s <= p.m);
  CHECK(p.m % p.s == 0);
  CHECK_THROWS_AS(plan_subspace(1, 0.5), Error);
  CHECK_THROWS_AS(plan_subspace(8, 1.5), Error);
}

TEST_CASE("subspace sparsity grows strictly with k") {
  // Formula evaluated independently before the build: 16, 32, 64, 123.
  CHECK(plan_subspace(4, 0.5).s == 16);
  CHECK(plan_subspace(8, 0.5).s == 32);
  CHECK(plan_subspace(16, 0.5).s == 64);
  CHECK(plan_subspace(32, 0.5).s == 123);
}

TEST_CASE("calibrate rejects bad preconditions") {
  CHECK_THROWS_AS(params::calibrate_constants(0.0, 200, 64, 32, 0.5, 0), Error);
  CHECK_THROWS_AS(params::calibrate_constants(1.0, 200, 64, 32, 0.5, 0), Error);
  CHECK_THROWS_AS(params::calibrate_constants(0.9, 99, 64, 32, 0.5, 0), Error);
}

TEST_CASE("calibrate is deterministic and monotone in the target" *
          doctest::timeout(300)) {
  const auto c1 = params::calibrate_constants(0.5, 100, 64, 32, 0.5, 42);
  const auto c2 = params::calibrate_constants(0.5, 100, 64, 32, 0.5, 42);
  CHECK(c1.c_m == c2.c_m);
  CHECK(c1.c_s == c2.c_s);
  const auto c3 = params::calibrate_constants(0.9, 100, 64, 32, 0.5, 42);
  CHECK(c1.c_m * c1.c_s <= c3.c_m * c3.c_s);
}

TEST_SUITE_END();
