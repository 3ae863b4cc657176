#include "sparsejl/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsejl/prng.hpp"

namespace sparsejl::vectors {

SplitVector split_top(const SparseVector& x, uint64_t ell) {
  if (ell < 1) fail(ErrorCode::InvalidArgument, "split_top: ell must be at least 1");
  SplitVector out;
  out.ell = ell;
  out.head.dim = out.tail.dim = x.dim;

  std::vector<size_t> order(x.nnz());
  std::iota(order.begin(), order.end(), 0);
  // Largest magnitude first, lower index wins ties.
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double ma = std::fabs(x.val[a]), mb = std::fabs(x.val[b]);
    if (ma != mb) return ma > mb;
    return x.idx[a] < x.idx[b];
  });

  std::vector<bool> in_head(x.nnz(), false);
  const size_t take = std::min<size_t>(ell, x.nnz());
  for (size_t k = 0; k < take; ++k) in_head[order[k]] = true;

  for (size_t k = 0; k < x.nnz(); ++k)
    (in_head[k] ? out.head : out.tail).push(x.idx[k], x.val[k]);
  return out;
}

SplitVector split_heavy(const SparseVector& x, uint64_t ell) {
  if (ell < 1) fail(ErrorCode::InvalidArgument, "split_heavy: ell must be at least 1");
  SplitVector out;
  out.ell = ell;
  out.head.dim = out.tail.dim = x.dim;
  const double threshold = 1.0 / std::sqrt(static_cast<double>(ell));
  for (size_t k = 0; k < x.nnz(); ++k)
    (std::fabs(x.val[k]) > threshold ? out.head : out.tail).push(x.idx[k], x.val[k]);
  return out;
}

double infty_ratio(const SparseVector& x) {
  if (x.nnz() == 0) fail(ErrorCode::InvalidArgument, "infty_ratio: zero vector");
  return x.linf() / x.norm();
}

NormalizedPairs normalize_pairs(const Dataset& X) {
  if (X.size() < 2) fail(ErrorCode::InvalidArgument, "normalize_pairs: need at least 2 points");
  NormalizedPairs out;
  out.pairs.dim = X.dim;
  for (size_t i = 0; i < X.size(); ++i) {
    for (size_t j = i + 1; j < X.size(); ++j) {
      SparseVector diff = sub(X.points[i], X.points[j]);
      if (diff.nnz() == 0) {
        ++out.skipped;
        continue;
      }
      out.pairs.add(scaled(diff, 1.0 / diff.norm()));
    }
  }
  return out;
}

SparseVector random_sparse_unit(uint32_t d, uint32_t nnz, uint64_t seed, uint64_t stream) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "random_sparse_unit: d must be positive");
  nnz = std::min(nnz, d);
  if (nnz == 0) nnz = 1;
  rng::Stream rs(seed, stream);

  // Floyd's sampling of nnz distinct indices.
  std::vector<uint32_t> picked;
  picked.reserve(nnz);
  for (uint32_t t = d - nnz; t < d; ++t) {
    const uint32_t r = static_cast<uint32_t>(rs.below(t + 1));
    if (std::find(picked.begin(), picked.end(), r) == picked.end())
      picked.push_back(r);
    else
      picked.push_back(t);
  }
  std::sort(picked.begin(), picked.end());

  SparseVector x;
  x.dim = d;
  double norm2 = 0.0;
  for (uint32_t i : picked) {
    double v = rs.normal();
    if (v == 0.0) v = 1.0;  // keep support size exact
    x.push(i, v);
    norm2 += v * v;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : x.val) v *= inv;
  return x;
}

Dataset random_sparse_dataset(uint64_t n, uint32_t d, uint32_t nnz, uint64_t seed) {
  Dataset X;
  X.dim = d;
  X.points.reserve(n);
  for (uint64_t i = 0; i < n; ++i) X.add(random_sparse_unit(d, nnz, seed, i));
  return X;
}

}  // namespace sparsejl::vectors
