#pragma once

#include <cstdint>
#include <vector>

#include "sparsejl/linalg.hpp"
#include "sparsejl/params.hpp"
#include "sparsejl/sketch.hpp"
#include "sparsejl/types.hpp"

// Oblivious subspace embedding workflow: orthonormal bases with per-coordinate
// leverage-style scores, the heavy-coordinate cover, greedy 1/2-nets with a
// Monte Carlo covering certificate and their pairwise-sum expansion, exact
// subspace distortion through the sketched Gram spectrum, and sketched least
// squares.

namespace sparsejl::subspace {

struct SubspaceBasis {
  uint64_t k = 0;
  uint64_t d = 0;
  DenseMatrix vectors;                     // k x d, rows orthonormal
  std::vector<double> coordinate_scores;   // tau_i = sum_j vectors(j,i)^2
};

// Modified Gram-Schmidt with a re-orthogonalization pass over the rows of
// raw (k x d). A row whose residual norm falls to tol or below is a rank
// deficiency and an error.
SubspaceBasis orthonormalize(const DenseMatrix& raw, double tol = 1e-10);

// Basis of a uniformly random k-dimensional subspace (gaussian rows,
// orthonormalized).
SubspaceBasis random_basis(uint64_t k, uint64_t d, uint64_t seed);

// S = { i : tau_i >= 1/ell }, ascending. |S| <= k*ell always, and every unit
// vector of the span satisfies |v_i| < 1/sqrt(ell) outside S.
std::vector<uint32_t> heavy_coordinates(const SubspaceBasis& B, uint64_t ell);

struct HalfNet {
  uint64_t k = 0;
  DenseMatrix points;  // one unit row per net point, in basis coordinates
  uint64_t probe_count = 0;        // total candidates drawn
  double max_observed_gap = 0.0;   // largest min-distance seen in the final
                                   // certifying probe streak; <= 1/2
};

// Greedy farthest-point cover of the unit sphere of the coefficient space:
// candidates farther than 1/2 from the current net are added until
// probe_budget consecutive probes find no gap. The certificate is Monte
// Carlo evidence of covering, not a proof. Guarded at k <= 12.
HalfNet build_half_net(const SubspaceBasis& B, uint64_t probe_budget, uint64_t seed);

// { x + y : x, y in N union {0} }, deduplicated by exact coefficient
// equality; contains 0, every net point and every doubled net point.
DenseMatrix expand_net(const HalfNet& N);

// sup over unit x in span(B) of |  ||Ax||^2 - 1 |, computed exactly as the
// extreme eigenvalue deviation of the k x k Gram of A applied to the basis.
double subspace_distortion(const sketch::SparseJLMatrix& A, const SubspaceBasis& B);

struct SketchSolveResult {
  std::vector<double> beta;
  params::SubspacePlan plan;
  uint64_t effective_rank = 0;
};

// Sketch-and-solve least squares: plans a subspace embedding for
// span{y, cols(X)} (dimension at most p+1), sketches both sides and solves
// the small system by column-pivoted QR. Rank deficiency of the sketched
// system is an error unless ridge > 0 adds an explicit lambda*I term.
SketchSolveResult sketch_solve(const DenseMatrix& X, const std::vector<double>& y, double eps,
                               uint64_t seed, double c_m = 1.0, double c_s = 1.0,
                               double ridge = 0.0);

// Exact dense solve on the original system; the comparison oracle.
linalg::LstsqResult exact_lstsq(const DenseMatrix& X, const std::vector<double>& y);

double residual_norm2(const DenseMatrix& X, const std::vector<double>& y,
                      const std::vector<double>& beta);

}  // namespace sparsejl::subspace
