#ifndef GRAPHCOV_LINALG_H_
#define GRAPHCOV_LINALG_H_

#include "graphcov/common.h"

namespace graphcov {

// Singular values of `a`, descending.
Vector singular_values(const CMatrix& a);

// Relative rank threshold max(rows, cols) * eps; multiply by sigma_max.
double rank_threshold(Eigen::Index rows, Eigen::Index cols);

// Number of singular values above rank_threshold * sigma_max.
int numerical_rank(const Vector& sigma, Eigen::Index rows, Eigen::Index cols);

// Real linear system equivalent to a complex one with real unknowns:
// [Re(A); Im(A)] x = [Re(b); Im(b)]. The imaginary block is omitted when
// both A and b are real.
struct RealSystem {
  Matrix a;
  Vector b;
};
RealSystem stack_real(const CMatrix& a, const CVector& b);

struct LeastSquaresSolution {
  Vector x;
  double residual_norm = 0.0;
  int rank = 0;
};

// Column-pivoted Householder QR solve. Throws RankDeficientError when the
// pivoted R has fewer than cols() entries above the rank threshold.
LeastSquaresSolution solve_least_squares(const Matrix& a, const Vector& b);

// log det of a Hermitian positive definite matrix via Cholesky. Throws
// SingularError if the factorization fails.
double log_det_hpd(const CMatrix& a);

// True if the matrix has any NaN or infinity.
bool has_non_finite(const CMatrix& a);

}  // namespace graphcov

#endif  // GRAPHCOV_LINALG_H_
