#include "defeig/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"

namespace defeig {
namespace {

constexpr double kHermitianTol = 1e-12;

Matrix enforce_hermitian(Matrix m, const char* name) {
  if (m == m.adjoint()) return m;
  const double scale = std::max(1.0, linalg::spectral_norm(m));
  const double defect = linalg::hermitian_defect(m);
  if (defect > kHermitianTol * scale) {
    std::ostringstream os;
    os << "matrix " << name << " is not Hermitian: ||M - M^H||_2 = " << defect;
    fail(ErrorKind::kInvalidInput, os.str());
  }
  return linalg::hermitian_part(m);
}

}  // namespace

HermitianPencil::HermitianPencil(Matrix a, Matrix b) {
  require(a.rows() >= 1 && a.rows() == a.cols(), ErrorKind::kInvalidInput,
          "pencil matrix A must be square with n >= 1");
  require(b.rows() == a.rows() && b.cols() == a.cols(), ErrorKind::kInvalidInput,
          "pencil matrices A and B must have equal dimensions");
  a_ = enforce_hermitian(std::move(a), "A");
  b_ = enforce_hermitian(std::move(b), "B");
  norm_a_ = linalg::hermitian_norm(a_);
  norm_b_ = linalg::hermitian_norm(b_);
}

double pencil_norm(const HermitianPencil& p) {
  const Matrix gram = p.a() * p.a().adjoint() + p.b() * p.b().adjoint();
  return std::sqrt(std::max(0.0, linalg::lambda_max(linalg::hermitian_part(gram))));
}

double chordal_distance(double z, double zp) {
  if (std::max(std::abs(z), std::abs(zp)) > 1e100) {
    // angle form, also valid for infinite arguments
    return std::abs(std::sin(std::atan(z) - std::atan(zp)));
  }
  return std::abs(z - zp) / std::sqrt((z * z + 1.0) * (zp * zp + 1.0));
}

double rotated_lambda_min(const HermitianPencil& p, double theta) {
  const Matrix m = std::cos(theta) * p.a() + std::sin(theta) * p.b();
  return linalg::lambda_min(m);
}

CrawfordEstimate crawford_lower_bound(const HermitianPencil& p, int grid_points,
                                      double refine_tol) {
  require(grid_points >= 8, ErrorKind::kInvalidInput, "crawford_lower_bound needs >= 8 grid points");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double h = kTwoPi / grid_points;

  std::vector<double> values(grid_points);
  int best = 0;
  for (int j = 0; j < grid_points; ++j) {
    values[j] = rotated_lambda_min(p, j * h);
    if (values[j] > values[best]) best = j;
  }

  double best_theta = best * h;
  double best_value = values[best];
  // Every evaluation certifies a lower bound, so the best one seen is kept.
  auto eval = [&](double theta) {
    const double v = rotated_lambda_min(p, theta);
    if (v > best_value) {
      best_value = v;
      best_theta = theta;
    }
    return v;
  };

  // Golden-section search for the maximum on [theta_best - h, theta_best + h].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * h;
  double hi = (best + 1) * h;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  int iters = 0;
  while (hi - lo > refine_tol && iters < 200) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    }
    ++iters;
  }

  CrawfordEstimate est;
  best_theta = std::fmod(best_theta, kTwoPi);
  if (best_theta < 0.0) best_theta += kTwoPi;
  est.theta_star = best_theta;
  est.lambda_min_at_theta = best_value;
  est.gamma_lb = std::max(best_value, 0.0);
  est.refinement_iters = iters;
  return est;
}

DefinitenessCheck is_definite(const HermitianPencil& p, int grid_points) {
  DefinitenessCheck out;
  out.estimate = crawford_lower_bound(p, grid_points);
  out.definite = out.estimate.gamma_lb > 0.0;
  return out;
}

double min_eigenvalue_gap(std::span<const double> sorted_eigs) {
  require(sorted_eigs.size() >= 2, ErrorKind::kInvalidInput,
          "min_eigenvalue_gap needs at least two eigenvalues");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted_eigs.size(); ++i)
    gap = std::min(gap, sorted_eigs[i] - sorted_eigs[i - 1]);
  return gap;
}

}  // namespace defeig
