#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsejl {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  RankDeficient,
  GuardExceeded,
  Io,
  NoResult,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

// Sparse vector in coordinate form: indices strictly ascending, values
// nonzero, all indices < dim. No explicit zeros are stored.
struct SparseVector {
  uint32_t dim = 0;
  std::vector<uint32_t> idx;
  std::vector<double> val;

  size_t nnz() const noexcept { return idx.size(); }

  double norm2() const noexcept {
    double acc = 0.0;
    for (double v : val) acc += v * v;
    return acc;
  }
  double norm() const noexcept;
  double linf() const noexcept;

  void push(uint32_t i, double v) {
    idx.push_back(i);
    val.push_back(v);
  }

  bool operator==(const SparseVector& o) const noexcept {
    return dim == o.dim && idx == o.idx && val == o.val;
  }
};

// Validates the SparseVector invariants; throws InvalidArgument on violation.
void validate(const SparseVector& x);

SparseVector from_dense(const std::vector<double>& dense);
std::vector<double> to_dense(const SparseVector& x);

double dot(const SparseVector& a, const SparseVector& b);

// a - b with exact-zero entries dropped.
SparseVector sub(const SparseVector& a, const SparseVector& b);

SparseVector scaled(const SparseVector& x, double alpha);

// Named, ordered collection of points sharing one ambient dimension.
struct Dataset {
  uint32_t dim = 0;
  std::vector<SparseVector> points;
  std::vector<std::string> labels;  // empty or one per point

  size_t size() const noexcept { return points.size(); }
  void add(SparseVector x) { points.push_back(std::move(x)); }
};

void validate(const Dataset& X);

// Dense row-major matrix, used for embedded outputs, materialized sketch
// matrices and small solver workspaces.
struct DenseMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(size_t r, size_t c) noexcept { return a[r * cols + c]; }
  double at(size_t r, size_t c) const noexcept { return a[r * cols + c]; }
  double* row(size_t r) noexcept { return a.data() + r * cols; }
  const double* row(size_t r) const noexcept { return a.data() + r * cols; }
};

// Support-disjoint decomposition of a vector; head + tail reconstructs the
// original exactly on stored values.
struct SplitVector {
  SparseVector head;
  SparseVector tail;
  uint64_t ell = 0;
};

}  // namespace sparsejl
