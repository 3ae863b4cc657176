#include "sparsejl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sparsejl::linalg {

namespace {

double offdiag_frobenius2(const DenseMatrix& M) {
  double acc = 0.0;
  for (size_t p = 0; p < M.rows; ++p)
    for (size_t q = p + 1; q < M.cols; ++q) acc += 2.0 * M.at(p, q) * M.at(p, q);
  return acc;
}

}  // namespace

std::vector<double> jacobi_eigenvalues(DenseMatrix sym, double tol) {
  if (sym.rows != sym.cols) fail(ErrorCode::InvalidArgument, "jacobi: matrix not square");
  const size_t n = sym.rows;
  if (n == 0) return {};
  if (n == 1) return {sym.at(0, 0)};

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_frobenius2(sym) <= tol * tol) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = sym.at(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (sym.at(q, q) - sym.at(p, p)) / (2.0 * apq);
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = sym.at(p, p);
        const double aqq = sym.at(q, q);
        sym.at(p, p) = app - t * apq;
        sym.at(q, q) = aqq + t * apq;
        sym.at(p, q) = 0.0;
        sym.at(q, p) = 0.0;
        for (size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = sym.at(r, p);
          const double arq = sym.at(r, q);
          sym.at(r, p) = arp - s * (arq + tau * arp);
          sym.at(p, r) = sym.at(r, p);
          sym.at(r, q) = arq + s * (arp - tau * arq);
          sym.at(q, r) = sym.at(r, q);
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (size_t i = 0; i < n; ++i) eig[i] = sym.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

LstsqResult lstsq_qr(const DenseMatrix& M, const std::vector<double>& rhs, double rel_tol) {
  const size_t rows = M.rows;
  const size_t cols = M.cols;
  if (rhs.size() != rows) fail(ErrorCode::DimensionMismatch, "lstsq: rhs length mismatch");
  if (rows < cols) fail(ErrorCode::InvalidArgument, "lstsq: system is underdetermined");

  DenseMatrix R = M;
  std::vector<double> b = rhs;
  std::vector<size_t> perm(cols);
  for (size_t c = 0; c < cols; ++c) perm[c] = c;

  std::vector<double> colnorm2(cols, 0.0);
  for (size_t c = 0; c < cols; ++c)
    for (size_t r = 0; r < rows; ++r) colnorm2[c] += R.at(r, c) * R.at(r, c);

  size_t rank = 0;
  double max_pivot = 0.0;
  for (size_t k = 0; k < cols; ++k) {
    // Pivot: remaining column with the largest trailing norm.
    size_t best = k;
    for (size_t c = k + 1; c < cols; ++c)
      if (colnorm2[c] > colnorm2[best]) best = c;
    if (best != k) {
      for (size_t r = 0; r < rows; ++r) std::swap(R.at(r, k), R.at(r, best));
      std::swap(colnorm2[k], colnorm2[best]);
      std::swap(perm[k], perm[best]);
    }

    double norm2 = 0.0;
    for (size_t r = k; r < rows; ++r) norm2 += R.at(r, k) * R.at(r, k);
    const double alpha = std::sqrt(norm2);
    if (k == 0) max_pivot = alpha;
    if (alpha <= rel_tol * max_pivot || alpha == 0.0) break;

    // Householder reflector for column k.
    std::vector<double> v(rows - k);
    const double pivot = R.at(k, k);
    const double beta = pivot >= 0.0 ? -alpha : alpha;
    v[0] = pivot - beta;
    for (size_t r = k + 1; r < rows; ++r) v[r - k] = R.at(r, k);
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) break;

    R.at(k, k) = beta;
    for (size_t r = k + 1; r < rows; ++r) R.at(r, k) = 0.0;
    for (size_t c = k + 1; c < cols; ++c) {
      double proj = 0.0;
      for (size_t r = k; r < rows; ++r) proj += v[r - k] * R.at(r, c);
      const double coeff = 2.0 * proj / vnorm2;
      for (size_t r = k; r < rows; ++r) R.at(r, c) -= coeff * v[r - k];
    }
    {
      double proj = 0.0;
      for (size_t r = k; r < rows; ++r) proj += v[r - k] * b[r];
      const double coeff = 2.0 * proj / vnorm2;
      for (size_t r = k; r < rows; ++r) b[r] -= coeff * v[r - k];
    }

    for (size_t c = k + 1; c < cols; ++c) {
      colnorm2[c] -= R.at(k, c) * R.at(k, c);
      if (colnorm2[c] < 0.0) colnorm2[c] = 0.0;
    }
    ++rank;
  }

  LstsqResult out;
  out.rank = rank;
  out.rank_deficient = rank < cols;

  // Back substitution over the leading rank x rank triangle.
  std::vector<double> y(cols, 0.0);
  for (size_t ki = rank; ki-- > 0;) {
    double acc = b[ki];
    for (size_t c = ki + 1; c < rank; ++c) acc -= R.at(ki, c) * y[c];
    y[ki] = acc / R.at(ki, ki);
  }
  out.beta.assign(cols, 0.0);
  for (size_t c = 0; c < rank; ++c) out.beta[perm[c]] = y[c];
  return out;
}

DenseMatrix gram(const DenseMatrix& A) {
  DenseMatrix G(A.cols, A.cols);
  for (size_t r = 0; r < A.rows; ++r) {
    const double* row = A.row(r);
    for (size_t i = 0; i < A.cols; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (size_t j = i; j < A.cols; ++j) G.at(i, j) += ri * row[j];
    }
  }
  for (size_t i = 0; i < A.cols; ++i)
    for (size_t j = 0; j < i; ++j) G.at(i, j) = G.at(j, i);
  return G;
}

}  // namespace sparsejl::linalg
