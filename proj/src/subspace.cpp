#include "sparsejl/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsejl/prng.hpp"

namespace sparsejl::subspace {

SubspaceBasis orthonormalize(const DenseMatrix& raw, double tol) {
  const size_t k = raw.rows;
  const size_t d = raw.cols;
  if (k == 0 || d == 0) fail(ErrorCode::InvalidArgument, "orthonormalize: empty input");
  if (k > d) fail(ErrorCode::InvalidArgument, "orthonormalize: more rows than ambient dimension");

  SubspaceBasis B;
  B.k = k;
  B.d = d;
  B.vectors = DenseMatrix(k, d);

  std::vector<double> v(d);
  for (size_t i = 0; i < k; ++i) {
    std::copy(raw.row(i), raw.row(i) + d, v.begin());
    // Two projection passes keep the basis orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t j = 0; j < i; ++j) {
        const double* q = B.vectors.row(j);
        double proj = 0.0;
        for (size_t c = 0; c < d; ++c) proj += q[c] * v[c];
        for (size_t c = 0; c < d; ++c) v[c] -= proj * q[c];
      }
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    if (norm <= tol)
      fail(ErrorCode::RankDeficient, "orthonormalize: row " + std::to_string(i) +
                                         " is dependent (effective rank " + std::to_string(i) +
                                         ")");
    for (size_t c = 0; c < d; ++c) B.vectors.at(i, c) = v[c] / norm;
  }

  B.coordinate_scores.assign(d, 0.0);
  for (size_t j = 0; j < k; ++j) {
    const double* q = B.vectors.row(j);
    for (size_t c = 0; c < d; ++c) B.coordinate_scores[c] += q[c] * q[c];
  }
  return B;
}

SubspaceBasis random_basis(uint64_t k, uint64_t d, uint64_t seed) {
  if (k < 1 || k > d) fail(ErrorCode::InvalidArgument, "random_basis: need 1 <= k <= d");
  rng::Stream rs(seed, 0);
  DenseMatrix raw(k, d);
  for (double& x : raw.a) x = rs.normal();
  return orthonormalize(raw);
}

std::vector<uint32_t> heavy_coordinates(const SubspaceBasis& B, uint64_t ell) {
  if (ell < 1) fail(ErrorCode::InvalidArgument, "heavy_coordinates: ell must be >= 1");
  const double threshold = 1.0 / static_cast<double>(ell);
  std::vector<uint32_t> S;
  for (size_t i = 0; i < B.coordinate_scores.size(); ++i)
    if (B.coordinate_scores[i] >= threshold) S.push_back(static_cast<uint32_t>(i));
  return S;
}

HalfNet build_half_net(const SubspaceBasis& B, uint64_t probe_budget, uint64_t seed) {
  if (B.k > 12) fail(ErrorCode::GuardExceeded, "build_half_net: k > 12 (4^k net guard)");
  if (probe_budget < 1) fail(ErrorCode::InvalidArgument, "build_half_net: probe budget >= 1");
  const size_t k = B.k;

  HalfNet net;
  net.k = k;
  std::vector<std::vector<double>> points;
  rng::Stream rs(seed, 0);

  uint64_t streak = 0;
  double streak_gap = 0.0;
  std::vector<double> cand(k);
  while (streak < probe_budget) {
    double norm2 = 0.0;
    for (double& x : cand) {
      x = rs.normal();
      norm2 += x * x;
    }
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : cand) x *= inv;
    ++net.probe_count;

    double min_dist2 = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& p : points) {
      double d2 = 0.0;
      for (size_t c = 0; c < k; ++c) {
        const double diff = cand[c] - p[c];
        d2 += diff * diff;
      }
      min_dist2 = std::min(min_dist2, d2);
    }
    if (points.empty() || min_dist2 > 0.25) {
      points.push_back(cand);
      streak = 0;
      streak_gap = 0.0;
    } else {
      ++streak;
      streak_gap = std::max(streak_gap, std::sqrt(min_dist2));
    }
  }
  net.max_observed_gap = streak_gap;

  net.points = DenseMatrix(points.size(), k);
  for (size_t i = 0; i < points.size(); ++i)
    std::copy(points[i].begin(), points[i].end(), net.points.row(i));
  return net;
}

DenseMatrix expand_net(const HalfNet& N) {
  const size_t n = N.points.rows;
  const size_t k = N.k;
  std::vector<std::vector<double>> sums;
  sums.emplace_back(k, 0.0);  // 0 = 0 + 0
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> xi(N.points.row(i), N.points.row(i) + k);
    sums.push_back(xi);  // x + 0
    for (size_t j = i; j < n; ++j) {
      std::vector<double> xy(k);
      for (size_t c = 0; c < k; ++c) xy[c] = N.points.at(i, c) + N.points.at(j, c);
      sums.push_back(std::move(xy));
    }
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  DenseMatrix out(sums.size(), k);
  for (size_t i = 0; i < sums.size(); ++i) std::copy(sums[i].begin(), sums[i].end(), out.row(i));
  return out;
}

double subspace_distortion(const sketch::SparseJLMatrix& A, const SubspaceBasis& B) {
  if (B.d != A.cols_count())
    fail(ErrorCode::DimensionMismatch, "subspace_distortion: basis dim does not match matrix d");
  // Columns of U are the basis vectors; the Gram of A U has eigenvalues
  // ||A x||^2 over unit x in the span, extremized at the spectrum edges.
  DenseMatrix U(B.d, B.k);
  for (size_t j = 0; j < B.k; ++j)
    for (size_t c = 0; c < B.d; ++c) U.at(c, j) = B.vectors.at(j, c);
  const DenseMatrix M = sketch::apply_to_matrix(A, U);
  const DenseMatrix G = linalg::gram(M);
  const std::vector<double> eig = linalg::jacobi_eigenvalues(G);
  double dev = 0.0;
  for (double l : eig) dev = std::max(dev, std::fabs(l - 1.0));
  return dev;
}

SketchSolveResult sketch_solve(const DenseMatrix& X, const std::vector<double>& y, double eps,
                               uint64_t seed, double c_m, double c_s, double ridge) {
  const size_t n = X.rows;
  const size_t p = X.cols;
  if (p < 1) fail(ErrorCode::InvalidArgument, "sketch_solve: need at least one column");
  if (n < p) fail(ErrorCode::InvalidArgument, "sketch_solve: need n >= p");
  if (y.size() != n) fail(ErrorCode::DimensionMismatch, "sketch_solve: y length mismatch");
  if (ridge < 0.0) fail(ErrorCode::InvalidArgument, "sketch_solve: ridge must be >= 0");

  SketchSolveResult out;
  out.plan = params::plan_subspace(p + 1, eps, c_m, c_s);

  const sketch::SparseJLMatrix A(out.plan.m, n, out.plan.s, seed);

  // Sketch the design and target together: one n x (p+1) apply.
  DenseMatrix Xy(n, p + 1);
  for (size_t r = 0; r < n; ++r) {
    std::copy(X.row(r), X.row(r) + p, Xy.row(r));
    Xy.at(r, p) = y[r];
  }
  const DenseMatrix SXy = sketch::apply_to_matrix(A, Xy);

  const size_t m = SXy.rows;
  const size_t aug = ridge > 0.0 ? m + p : m;
  DenseMatrix SX(aug, p);
  std::vector<double> Sy(aug, 0.0);
  for (size_t r = 0; r < m; ++r) {
    std::copy(SXy.row(r), SXy.row(r) + p, SX.row(r));
    Sy[r] = SXy.at(r, p);
  }
  if (ridge > 0.0) {
    const double root = std::sqrt(ridge);
    for (size_t c = 0; c < p; ++c) SX.at(m + c, c) = root;
  }

  linalg::LstsqResult ls = linalg::lstsq_qr(SX, Sy);
  if (ls.rank_deficient && ridge == 0.0)
    fail(ErrorCode::RankDeficient, "sketch_solve: sketched system rank-deficient (effective rank " +
                                       std::to_string(ls.rank) + " of " + std::to_string(p) + ")");
  out.beta = std::move(ls.beta);
  out.effective_rank = ls.rank;
  return out;
}

linalg::LstsqResult exact_lstsq(const DenseMatrix& X, const std::vector<double>& y) {
  return linalg::lstsq_qr(X, y);
}

double residual_norm2(const DenseMatrix& X, const std::vector<double>& y,
                      const std::vector<double>& beta) {
  if (y.size() != X.rows || beta.size() != X.cols)
    fail(ErrorCode::DimensionMismatch, "residual_norm2: shape mismatch");
  double acc = 0.0;
  for (size_t r = 0; r < X.rows; ++r) {
    double pred = 0.0;
    const double* row = X.row(r);
    for (size_t c = 0; c < X.cols; ++c) pred += row[c] * beta[c];
    const double diff = pred - y[r];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace sparsejl::subspace
