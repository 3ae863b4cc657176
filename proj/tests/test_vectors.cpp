#include <cmath>

#include "doctest.h"
#include "sparsejl/prng.hpp"
#include "sparsejl/vectors.hpp"

using namespace sparsejl;
using vectors::split_heavy;
using vectors::split_top;

namespace {

SparseVector make(std::initializer_list<std::pair<uint32_t, double>> entries, uint32_t dim) {
  SparseVector x;
  x.dim = dim;
  for (const auto& [i, v] : entries) x.push(i, v);
  return x;
}

}  // namespace

TEST_SUITE_BEGIN("vectors");

TEST_CASE("split_top keeps the largest entries") {
  const SparseVector x = make({{0, 0.9}, {1, 0.3}, {2, 0.1}}, 3);
  const SplitVector s = split_top(x, 1);
  CHECK(s.head.nnz() == 1);
  CHECK(s.head.idx[0] == 0);
  CHECK(s.head.val[0] == 0.9);
  CHECK(s.tail.nnz() == 2);
  CHECK(s.tail.val[0] == 0.3);
  CHECK(s.tail.val[1] == 0.1);
}

TEST_CASE("split_top breaks magnitude ties by lower index") {
  const SparseVector x = make({{2, 0.5}, {7, 0.5}}, 10);
  const SplitVector s = split_top(x, 1);
  CHECK(s.head.idx[0] == 2);
  CHECK(s.tail.idx[0] == 7);
  // Negative value of equal magnitude still ties on index.
  const SparseVector y = make({{2, -0.5}, {7, 0.5}}, 10);
  CHECK(split_top(y, 1).head.idx[0] == 2);
}

TEST_CASE("split_top with ell beyond the support leaves no tail") {
  const SparseVector x = make({{1, 0.2}, {5, -0.4}}, 8);
  const SplitVector s = split_top(x, 10);
  CHECK(s.head.nnz() == 2);
  CHECK(s.tail.nnz() == 0);
  CHECK_THROWS_AS(split_top(x, 0), Error);
}

TEST_CASE("top-split tail obeys the infinity bound, scale-free") {
  for (int trial = 0; trial < 200; ++trial) {
    const SparseVector x = vectors::random_sparse_unit(64, 20, 11, trial);
    rng::Stream rs(trial, 1);
    const uint64_t ell = 1 + rs.below(8);
    const SplitVector s = split_top(x, ell);
    CHECK(s.tail.linf() <= x.norm() / std::sqrt(static_cast<double>(ell)) + 1e-15);

    // Reconstruction and support disjointness.
    const SparseVector back = sub(x, s.head);
    CHECK(back == s.tail);
    size_t i = 0, j = 0;
    while (i < s.head.nnz() && j < s.tail.nnz()) {
      CHECK(s.head.idx[i] != s.tail.idx[j]);
      if (s.head.idx[i] < s.tail.idx[j])
        ++i;
      else
        ++j;
    }
  }
}

TEST_CASE("split_heavy uses a strict threshold") {
  // |1| > 1/sqrt(1) = 1 is false: e_1 has no heavy part at ell = 1.
  const SparseVector e1 = make({{0, 1.0}}, 4);
  const SplitVector s = split_heavy(e1, 1);
  CHECK(s.head.nnz() == 0);
  CHECK(s.tail.nnz() == 1);

  const SparseVector x = make({{0, 0.8}, {1, 0.6}}, 2);
  const SplitVector t = split_heavy(x, 2);  // threshold 1/sqrt(2) ~ 0.7071
  CHECK(t.head.nnz() == 1);
  CHECK(t.head.val[0] == 0.8);
  CHECK(t.tail.val[0] == 0.6);
}

TEST_CASE("unit vectors have at most ell heavy entries") {
  for (int trial = 0; trial < 200; ++trial) {
    const SparseVector x = vectors::random_sparse_unit(64, 24, 13, trial);
    rng::Stream rs(trial, 2);
    const uint64_t ell = 1 + rs.below(6);
    const SplitVector s = split_heavy(x, ell);
    CHECK(s.head.nnz() <= ell);
    const SparseVector back = sub(x, s.head);
    CHECK(back == s.tail);
  }
}

TEST_CASE("infty_ratio") {
  CHECK(vectors::infty_ratio(make({{0, 1.0}}, 4)) == 1.0);
  const SparseVector x = make({{0, 3.0 / 5}, {1, 4.0 / 5}}, 2);
  CHECK(vectors::infty_ratio(x) == doctest::Approx(0.8).epsilon(1e-12));
  SparseVector uniform;
  uniform.dim = 16;
  for (uint32_t i = 0; i < 16; ++i) uniform.push(i, 0.25);
  CHECK(vectors::infty_ratio(uniform) == doctest::Approx(0.25).epsilon(1e-12));
  SparseVector zero;
  zero.dim = 4;
  CHECK_THROWS_AS(vectors::infty_ratio(zero), Error);
}

TEST_CASE("normalize_pairs") {
  Dataset X;
  X.dim = 4;
  X.add(make({{0, 1.0}}, 4));
  X.add(make({{1, 1.0}}, 4));
  const auto np = vectors::normalize_pairs(X);
  REQUIRE(np.pairs.size() == 1);
  CHECK(np.skipped == 0);
  const SparseVector& v = np.pairs.points[0];
  CHECK(v.nnz() == 2);
  CHECK(v.val[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(v.val[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));

  Dataset dup;
  dup.dim = 4;
  dup.add(make({{2, 0.5}}, 4));
  dup.add(make({{2, 0.5}}, 4));
  const auto npd = vectors::normalize_pairs(dup);
  CHECK(npd.pairs.size() == 0);
  CHECK(npd.skipped == 1);

  Dataset four;
  four.dim = 8;
  for (int i = 0; i < 4; ++i) four.add(vectors::random_sparse_unit(8, 3, 21, i));
  const auto npf = vectors::normalize_pairs(four);
  CHECK(npf.pairs.size() + npf.skipped == 6);
  CHECK(npf.pairs.size() == 6);  // random points are distinct
  for (const SparseVector& p : npf.pairs.points)
    CHECK(std::fabs(p.norm() - 1.0) <= 1e-12);

  Dataset one;
  one.dim = 4;
  one.add(make({{0, 1.0}}, 4));
  CHECK_THROWS_AS(vectors::normalize_pairs(one), Error);
}

TEST_CASE("random_sparse_unit has exact support and unit norm") {
  for (int trial = 0; trial < 100; ++trial) {
    const SparseVector x = vectors::random_sparse_unit(50, 7, 3, trial);
    CHECK(x.nnz() == 7);
    CHECK(std::fabs(x.norm() - 1.0) <= 1e-12);
    validate(x);
    const SparseVector y = vectors::random_sparse_unit(50, 7, 3, trial);
    CHECK(x == y);
  }
  // nnz is clamped to the dimension.
  CHECK(vectors::random_sparse_unit(5, 64, 1, 0).nnz() == 5);
}

TEST_SUITE_END();
