#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsejl/types.hpp"

// The block-structured sparse embedding matrix. Rows are grouped into s
// blocks of m/s consecutive rows; every column independently receives one
// uniformly placed entry per block with an independent uniform sign, of
// magnitude 1/sqrt(s). Entries are addressed by (seed, column, block), so a
// single column can be regenerated without sampling the rest, and resampling
// with the same (m, d, s, seed) reproduces the matrix bit for bit.
//
// The 1/sqrt(s) scale is applied at multiply time from one shared constant;
// only row indices and signs are stored.

namespace sparsejl::sketch {

class SparseJLMatrix {
 public:
  SparseJLMatrix(uint64_t m, uint64_t d, uint64_t s, uint64_t seed);

  uint64_t rows_count() const noexcept { return m_; }
  uint64_t cols_count() const noexcept { return d_; }
  uint64_t sparsity() const noexcept { return s_; }
  uint64_t block_size() const noexcept { return block_size_; }
  uint64_t seed() const noexcept { return seed_; }
  double scale() const noexcept { return scale_; }

  // Row index of column j's entry in block b.
  uint32_t row(uint64_t j, uint64_t b) const noexcept { return rows_[j * s_ + b]; }
  // Sign (+1/-1) of column j's entry in block b.
  int8_t sign(uint64_t j, uint64_t b) const noexcept { return signs_[j * s_ + b]; }

 private:
  uint64_t m_, d_, s_, block_size_, seed_;
  double scale_;
  std::vector<uint32_t> rows_;  // d*s entries, column-major, one per block
  std::vector<int8_t> signs_;
};

// Samples the distribution. Requires s >= 1, s | m, d >= 1.
SparseJLMatrix sample(uint64_t m, uint64_t d, uint64_t s, uint64_t seed);

// Regenerates a single column without sampling the others: rows_out/signs_out
// receive s entries (one per block). Must agree with sample() columns.
void sample_column(uint64_t m, uint64_t s, uint64_t seed, uint64_t column,
                   std::vector<uint32_t>& rows_out, std::vector<int8_t>& signs_out);

// y = A x by scattering; touches exactly s * nnz(x) accumulators.
std::vector<double> apply_sparse(const SparseJLMatrix& A, const SparseVector& x);

// Element-wise apply over a dataset; output order matches input order and is
// independent of internal parallelism.
std::vector<std::vector<double>> apply_dataset(const SparseJLMatrix& A, const Dataset& X);

// A * X for a dense d x c matrix X, column-wise.
DenseMatrix apply_to_matrix(const SparseJLMatrix& A, const DenseMatrix& X);

// Explicit m x d entries; test oracle. Guarded at m*d <= 1e8.
DenseMatrix materialize(const SparseJLMatrix& A);

inline constexpr int kFormatVersion = 1;

// Canonical serialized form is the single-line JSON header
//   {"format_version":1,"m":..,"d":..,"s":..,"seed":..,"prng_id":"..."}
// from which the matrix is reproducible. With explicit_dump, one line per
// column follows ("<col> <row>:<+1|-1> ..."), for interop with readers that
// do not implement the generator.
void save_matrix(const SparseJLMatrix& A, const std::string& path, bool explicit_dump = false);

// Reads either form. A present dump is validated against the regenerated
// entries; a mismatch is an error.
SparseJLMatrix load_matrix(const std::string& path);

}  // namespace sparsejl::sketch
