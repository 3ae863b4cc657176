#include "sparsejl/types.hpp"

#include <cmath>

namespace sparsejl {

double SparseVector::norm() const noexcept { return std::sqrt(norm2()); }

double SparseVector::linf() const noexcept {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::fabs(v));
  return m;
}

void validate(const SparseVector& x) {
  if (x.idx.size() != x.val.size())
    fail(ErrorCode::InvalidArgument, "sparse vector: index/value length mismatch");
  for (size_t k = 0; k < x.idx.size(); ++k) {
    if (x.idx[k] >= x.dim)
      fail(ErrorCode::InvalidArgument,
           "sparse vector: index " + std::to_string(x.idx[k]) + " out of range for dim " +
               std::to_string(x.dim));
    if (k > 0 && x.idx[k] <= x.idx[k - 1])
      fail(ErrorCode::InvalidArgument, "sparse vector: indices not strictly ascending");
    if (x.val[k] == 0.0) fail(ErrorCode::InvalidArgument, "sparse vector: explicit zero stored");
  }
}

SparseVector from_dense(const std::vector<double>& dense) {
  SparseVector x;
  x.dim = static_cast<uint32_t>(dense.size());
  for (size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) x.push(static_cast<uint32_t>(i), dense[i]);
  return x;
}

std::vector<double> to_dense(const SparseVector& x) {
  std::vector<double> dense(x.dim, 0.0);
  for (size_t k = 0; k < x.nnz(); ++k) dense[x.idx[k]] = x.val[k];
  return dense;
}

double dot(const SparseVector& a, const SparseVector& b) {
  if (a.dim != b.dim) fail(ErrorCode::DimensionMismatch, "dot: dimension mismatch");
  double acc = 0.0;
  size_t i = 0, j = 0;
  while (i < a.nnz() && j < b.nnz()) {
    if (a.idx[i] < b.idx[j])
      ++i;
    else if (a.idx[i] > b.idx[j])
      ++j;
    else
      acc += a.val[i++] * b.val[j++];
  }
  return acc;
}

SparseVector sub(const SparseVector& a, const SparseVector& b) {
  if (a.dim != b.dim) fail(ErrorCode::DimensionMismatch, "sub: dimension mismatch");
  SparseVector out;
  out.dim = a.dim;
  size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    if (j >= b.nnz() || (i < a.nnz() && a.idx[i] < b.idx[j])) {
      out.push(a.idx[i], a.val[i]);
      ++i;
    } else if (i >= a.nnz() || b.idx[j] < a.idx[i]) {
      out.push(b.idx[j], -b.val[j]);
      ++j;
    } else {
      const double v = a.val[i] - b.val[j];
      if (v != 0.0) out.push(a.idx[i], v);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector scaled(const SparseVector& x, double alpha) {
  SparseVector out;
  out.dim = x.dim;
  if (alpha == 0.0) return out;
  out.idx = x.idx;
  out.val.reserve(x.val.size());
  for (double v : x.val) out.val.push_back(alpha * v);
  return out;
}

void validate(const Dataset& X) {
  if (!X.labels.empty() && X.labels.size() != X.points.size())
    fail(ErrorCode::InvalidArgument, "dataset: label count does not match point count");
  for (const SparseVector& p : X.points) {
    if (p.dim != X.dim) fail(ErrorCode::DimensionMismatch, "dataset: member dimension mismatch");
    validate(p);
  }
}

}  // namespace sparsejl
