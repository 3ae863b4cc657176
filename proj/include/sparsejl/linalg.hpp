#pragma once

#include <cstdint>
#include <vector>

#include "sparsejl/types.hpp"

// Small dense kernels the subspace module needs: a cyclic Jacobi eigenvalue
// sweep for symmetric k x k Gram matrices and a column-pivoted Householder QR
// least-squares solve. Both are dependency-free and sized for desk-scale k.

namespace sparsejl::linalg {

// Eigenvalues of a symmetric matrix, ascending. Iterates Jacobi sweeps until
// the off-diagonal Frobenius mass drops below tol (absolute, default suits
// Gram matrices with entries O(1)).
std::vector<double> jacobi_eigenvalues(DenseMatrix sym, double tol = 1e-10);

struct LstsqResult {
  std::vector<double> beta;
  uint64_t rank = 0;        // numerically effective rank
  bool rank_deficient = false;
};

// Minimizes ||M beta - rhs||_2 via Householder QR with column pivoting.
// Pivots below rel_tol * |largest pivot| mark rank deficiency; dependent
// coefficients are returned as zero and the flag is set.
LstsqResult lstsq_qr(const DenseMatrix& M, const std::vector<double>& rhs,
                     double rel_tol = 1e-12);

// C = A^T A for a dense rows x cols matrix (cols x cols output).
DenseMatrix gram(const DenseMatrix& A);

}  // namespace sparsejl::linalg
