#pragma once

#include <span>
#include <utility>
#include <vector>

#include "defeig/pencil.hpp"
#include "defeig/result.hpp"

namespace defeig {

/// Dense reference diagonalization through a rotation to a positive definite
/// B' and Cholesky. Columns of x_std are scaled so alpha_i^2 + beta_i^2 = 1,
/// with (alpha_i, beta_i) = (x_i^H A x_i, x_i^H B x_i); sorted by eigenvalue.
struct OracleSolution {
  std::vector<double> eigenvalues;
  Matrix x_std;
  RealVector alpha;
  RealVector beta;
  double kappa_x = 1.0;
  double theta_rotation = 0.0;
};

OracleSolution reference_solve(const HermitianPencil& p);

/// Same output through Cholesky of B directly; B must be positive definite.
OracleSolution reference_solve_b_definite(const HermitianPencil& p);

/// (||X^H A X - diag(la)||_2, ||X^H B X - diag(lb)||_2).
std::pair<double, double> backward_residuals(const HermitianPencil& p, const Matrix& x,
                                             const RealVector& lambda_a,
                                             const RealVector& lambda_b);
std::pair<double, double> backward_residuals(const HermitianPencil& p,
                                             const DiagonalizationResult& result);

/// max_i chordal_distance(eigs1[i], eigs2[i]) for two sorted lists.
double chordal_match(std::span<const double> eigs1, std::span<const double> eigs2);

}  // namespace defeig
