#include "sparsejl/sketch.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "sparsejl/parallel.hpp"
#include "sparsejl/prng.hpp"

namespace sparsejl::sketch {

namespace {

// Returns m/s after validating the shape, so it is safe to use in member
// initializers.
uint64_t checked_block_size(uint64_t m, uint64_t d, uint64_t s) {
  if (s < 1) fail(ErrorCode::InvalidArgument, "sparsity s must be at least 1");
  if (d < 1) fail(ErrorCode::InvalidArgument, "column count d must be at least 1");
  if (s > m) fail(ErrorCode::InvalidArgument, "sparsity s exceeds row count m");
  if (m % s != 0) fail(ErrorCode::InvalidArgument, "s must divide m (equal blocks)");
  if (m > (uint64_t{1} << 32))
    fail(ErrorCode::InvalidArgument, "row count m exceeds 2^32");
  return m / s;
}

}  // namespace

SparseJLMatrix::SparseJLMatrix(uint64_t m, uint64_t d, uint64_t s, uint64_t seed)
    : m_(m), d_(d), s_(s), block_size_(checked_block_size(m, d, s)), seed_(seed),
      scale_(1.0 / std::sqrt(static_cast<double>(s))) {
  rows_.resize(d * s);
  signs_.resize(d * s);
  for (uint64_t j = 0; j < d; ++j) {
    for (uint64_t b = 0; b < s; ++b) {
      const rng::Words w = rng::words(seed, j, static_cast<uint32_t>(b), rng::Domain::MatrixEntry);
      rows_[j * s + b] =
          static_cast<uint32_t>(b * block_size_ + rng::bounded(w.lo, block_size_));
      signs_[j * s + b] = (w.hi & 1) ? int8_t{1} : int8_t{-1};
    }
  }
}

SparseJLMatrix sample(uint64_t m, uint64_t d, uint64_t s, uint64_t seed) {
  return SparseJLMatrix(m, d, s, seed);
}

void sample_column(uint64_t m, uint64_t s, uint64_t seed, uint64_t column,
                   std::vector<uint32_t>& rows_out, std::vector<int8_t>& signs_out) {
  if (s < 1 || s > m || m % s != 0)
    fail(ErrorCode::InvalidArgument, "sample_column: invalid (m, s)");
  const uint64_t block_size = m / s;
  rows_out.resize(s);
  signs_out.resize(s);
  for (uint64_t b = 0; b < s; ++b) {
    const rng::Words w = rng::words(seed, column, static_cast<uint32_t>(b), rng::Domain::MatrixEntry);
    rows_out[b] = static_cast<uint32_t>(b * block_size + rng::bounded(w.lo, block_size));
    signs_out[b] = (w.hi & 1) ? int8_t{1} : int8_t{-1};
  }
}

std::vector<double> apply_sparse(const SparseJLMatrix& A, const SparseVector& x) {
  if (x.dim != A.cols_count())
    fail(ErrorCode::DimensionMismatch,
         "apply_sparse: vector dim " + std::to_string(x.dim) + " vs matrix d " +
             std::to_string(A.cols_count()));
  std::vector<double> y(A.rows_count(), 0.0);
  const uint64_t s = A.sparsity();
  const double scale = A.scale();
  for (size_t k = 0; k < x.nnz(); ++k) {
    const uint64_t j = x.idx[k];
    const double v = x.val[k] * scale;
    for (uint64_t b = 0; b < s; ++b) y[A.row(j, b)] += A.sign(j, b) * v;
  }
  return y;
}

std::vector<std::vector<double>> apply_dataset(const SparseJLMatrix& A, const Dataset& X) {
  for (size_t i = 0; i < X.points.size(); ++i)
    if (X.points[i].dim != A.cols_count())
      fail(ErrorCode::DimensionMismatch,
           "apply_dataset: member " + std::to_string(i) + " has dim " +
               std::to_string(X.points[i].dim) + ", matrix d is " +
               std::to_string(A.cols_count()));
  std::vector<std::vector<double>> out(X.points.size());
  par::for_blocks(X.points.size(), 16, [&](size_t, size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) out[i] = apply_sparse(A, X.points[i]);
  });
  return out;
}

DenseMatrix apply_to_matrix(const SparseJLMatrix& A, const DenseMatrix& X) {
  if (X.rows != A.cols_count())
    fail(ErrorCode::DimensionMismatch, "apply_to_matrix: X has " + std::to_string(X.rows) +
                                           " rows, matrix d is " +
                                           std::to_string(A.cols_count()));
  DenseMatrix Y(A.rows_count(), X.cols);
  const uint64_t s = A.sparsity();
  const double scale = A.scale();
  for (uint64_t j = 0; j < X.rows; ++j) {
    const double* xr = X.row(j);
    for (uint64_t b = 0; b < s; ++b) {
      const double coeff = A.sign(j, b) * scale;
      double* yr = Y.row(A.row(j, b));
      for (size_t c = 0; c < X.cols; ++c) yr[c] += coeff * xr[c];
    }
  }
  return Y;
}

DenseMatrix materialize(const SparseJLMatrix& A) {
  if (A.rows_count() * A.cols_count() > 100000000ull)
    fail(ErrorCode::GuardExceeded, "materialize: m*d exceeds 1e8");
  DenseMatrix M(A.rows_count(), A.cols_count());
  const double scale = A.scale();
  for (uint64_t j = 0; j < A.cols_count(); ++j)
    for (uint64_t b = 0; b < A.sparsity(); ++b) M.at(A.row(j, b), j) = A.sign(j, b) * scale;
  return M;
}

void save_matrix(const SparseJLMatrix& A, const std::string& path, bool explicit_dump) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  char header[256];
  std::snprintf(header, sizeof(header),
                "{\"format_version\":%d,\"m\":%" PRIu64 ",\"d\":%" PRIu64 ",\"s\":%" PRIu64
                ",\"seed\":%" PRIu64 ",\"prng_id\":\"%s\"}\n",
                kFormatVersion, A.rows_count(), A.cols_count(), A.sparsity(), A.seed(),
                rng::kPrngId);
  out << header;
  if (explicit_dump) {
    for (uint64_t j = 0; j < A.cols_count(); ++j) {
      out << j;
      for (uint64_t b = 0; b < A.sparsity(); ++b)
        out << ' ' << A.row(j, b) << ':' << (A.sign(j, b) > 0 ? "+1" : "-1");
      out << '\n';
    }
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

namespace {

// Minimal field scanner for the fixed single-line header written above.
bool scan_u64(const std::string& line, const char* key, uint64_t& out) {
  const std::string needle = std::string("\"") + key + "\":";
  const size_t pos = line.find(needle);
  if (pos == std::string::npos) return false;
  return std::sscanf(line.c_str() + pos + needle.size(), "%" SCNu64, &out) == 1;
}

}  // namespace

SparseJLMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open for reading: " + path);
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::Io, "empty matrix file: " + path);

  uint64_t version = 0, m = 0, d = 0, s = 0, seed = 0;
  if (!scan_u64(header, "format_version", version) || !scan_u64(header, "m", m) ||
      !scan_u64(header, "d", d) || !scan_u64(header, "s", s) || !scan_u64(header, "seed", seed))
    fail(ErrorCode::Io, "malformed matrix header in " + path);
  if (version != static_cast<uint64_t>(kFormatVersion))
    fail(ErrorCode::Io, "unsupported matrix format_version in " + path);
  if (header.find(std::string("\"prng_id\":\"") + rng::kPrngId + "\"") == std::string::npos)
    fail(ErrorCode::Io, "matrix file uses an unknown prng_id: " + path);

  SparseJLMatrix A(m, d, s, seed);

  // Validate a dump if one follows the header.
  std::string line;
  uint64_t col = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    uint64_t j = 0;
    int consumed = 0;
    if (std::sscanf(line.c_str(), "%" SCNu64 "%n", &j, &consumed) != 1 || j != col || j >= d)
      fail(ErrorCode::Io, "malformed dump line in " + path);
    const char* p = line.c_str() + consumed;
    for (uint64_t b = 0; b < s; ++b) {
      uint64_t r = 0;
      int sg = 0;
      if (std::sscanf(p, " %" SCNu64 ":%d%n", &r, &sg, &consumed) != 2)
        fail(ErrorCode::Io, "malformed dump entry in " + path);
      p += consumed;
      if (r != A.row(j, b) || sg != A.sign(j, b))
        fail(ErrorCode::Io, "dump disagrees with regenerated matrix in " + path);
    }
    ++col;
  }
  if (col != 0 && col != d) fail(ErrorCode::Io, "truncated dump in " + path);
  return A;
}

}  // namespace sparsejl::sketch
