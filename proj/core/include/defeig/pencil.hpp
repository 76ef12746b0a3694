#pragma once

#include <span>

#include "defeig/types.hpp"

namespace defeig {

/// A pair (A, B) of n x n Hermitian matrices.
///
/// Inputs that are Hermitian up to 1e-12 * max(1, ||M||_2) are symmetrized
/// to (M + M^H) / 2 on construction; anything further off is rejected.
/// Exactly Hermitian inputs are stored bit-for-bit.
class HermitianPencil {
 public:
  HermitianPencil(Matrix a, Matrix b);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  Index n() const { return a_.rows(); }

  double norm_a() const { return norm_a_; }
  double norm_b() const { return norm_b_; }

 private:
  Matrix a_;
  Matrix b_;
  double norm_a_;
  double norm_b_;
};

struct CrawfordEstimate {
  double gamma_lb = 0.0;            ///< max(lambda_min_at_theta, 0): a certified lower bound
  double theta_star = 0.0;          ///< maximizing angle in [0, 2*pi)
  double lambda_min_at_theta = 0.0; ///< lambda_min(cos(theta) A + sin(theta) B)
  int refinement_iters = 0;
};

/// ||[A, B]||_2 = sqrt(lambda_max(A A^H + B B^H)).
double pencil_norm(const HermitianPencil& p);

/// |z - z'| / sqrt((z^2 + 1)(z'^2 + 1)).
double chordal_distance(double z, double zp);

/// lambda_min(cos(theta) A + sin(theta) B).
double rotated_lambda_min(const HermitianPencil& p, double theta);

/// Lower bound for the Crawford number from a uniform theta sweep over
/// [0, 2*pi) followed by golden-section refinement of the best bracket.
CrawfordEstimate crawford_lower_bound(const HermitianPencil& p, int grid_points = 360,
                                      double refine_tol = 1e-12);

struct DefinitenessCheck {
  bool definite = false;
  CrawfordEstimate estimate;
};

DefinitenessCheck is_definite(const HermitianPencil& p, int grid_points = 360);

/// Smallest difference between adjacent entries of an ascending list.
double min_eigenvalue_gap(std::span<const double> sorted_eigs);

}  // namespace defeig
