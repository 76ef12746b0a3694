#include "defeig/halley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "defeig/linalg.hpp"

namespace defeig {

namespace {
constexpr double kSmallestL = 1e-150;  // below this l^2 and l^(4/3) leave the double range
}

HalleyCoefficients halley_coefficients(double l) {
  require(l > 0.0 && l <= 1.0, ErrorKind::kInvalidInput, "Halley bound l must lie in (0, 1]");
  require(l >= kSmallestL, ErrorKind::kInvalidInput, "Halley bound l underflows double precision");
  HalleyCoefficients w;
  const double l2 = l * l;
  w.gamma_coef = std::cbrt(4.0 * (1.0 - l2)) / std::pow(l, 4.0 / 3.0);
  const double s = std::sqrt(1.0 + w.gamma_coef);
  w.b = s + 0.5 * std::sqrt(8.0 - 4.0 * w.gamma_coef + 8.0 * (2.0 - l2) / (l2 * s));
  w.a = (w.b - 1.0) * (w.b - 1.0) / 4.0;
  w.c = w.a + w.b - 1.0;
  return w;
}

double halley_map(double x, const HalleyCoefficients& w) {
  const double x2 = x * x;
  return x * (w.a * x2 + w.b) / (w.c * x2 + 1.0);
}

double next_lower_bound(double l) {
  const HalleyCoefficients w = halley_coefficients(l);
  const double l2 = l * l;
  double next;
  if (l > 0.99) {
    const double g = (w.a * l2 + (1.0 - w.b) * l + 1.0) / (w.c * l2 + 1.0);
    next = 1.0 - (1.0 - l) * std::max(g, 0.0);
  } else {
    next = l * (w.a * l2 + w.b) / (w.c * l2 + 1.0);
  }
  return std::clamp(next, l, 1.0);
}

int scalar_iteration_count(double l0, double l_target, int max_iters) {
  double l = l0;
  int k = 0;
  while (l < l_target && k < max_iters) {
    l = next_lower_bound(l);
    ++k;
  }
  return k;
}

HalleyState ifdwh_step(const HalleyState& state, const HalleyCoefficients& w) {
  const Index n = state.a_mat.rows();
  require(state.b_mat.rows() == n && state.a_mat.cols() == n && state.b_mat.cols() == n,
          ErrorKind::kInvalidInput, "Halley iterate must be a square pair");

  Matrix stack(2 * n, n);
  stack.topRows(n) = -state.b_mat;
  stack.bottomRows(n) = state.a_mat;
  const double scale = stack.norm();
  linalg::TrailingQ q = linalg::householder_q_columns(stack, n, n);
  if (!(q.r_diag_abs.minCoeff() > 1e-14 * scale)) {
    fail(ErrorKind::kBreakdown, "Halley step: stacked [-B; A] is numerically rank deficient");
  }
  const Matrix qa = q.q_cols.topRows(n).adjoint() * state.a_mat;     // Q12^H A
  const Matrix qb = q.q_cols.bottomRows(n).adjoint() * state.b_mat;  // Q22^H B
  const Matrix c_mat = w.a * qa + w.b * qb;
  const Matrix d_mat = w.c * qa + qb;

  stack.topRows(n) = -d_mat;
  stack.bottomRows(n) = state.a_mat;
  const double scale2 = stack.norm();
  linalg::TrailingQ u = linalg::householder_q_columns(stack, n, n);
  if (!(u.r_diag_abs.minCoeff() > 1e-14 * scale2)) {
    fail(ErrorKind::kBreakdown, "Halley step: stacked [-D; A] is numerically rank deficient");
  }

  HalleyState next;
  next.a_mat = u.q_cols.topRows(n).adjoint() * c_mat;
  next.b_mat = u.q_cols.bottomRows(n).adjoint() * state.b_mat;
  next.iters = state.iters + 1;
  next.l = state.l;
  return next;
}

HalleyState ifdwh_step(const HalleyState& state) {
  HalleyState next = ifdwh_step(state, halley_coefficients(state.l));
  next.l = next_lower_bound(state.l);
  return next;
}

HalleyState ifdwh_run(const Matrix& a0, const Matrix& b0, double l0, double l_target,
                      int max_iters) {
  require(l0 > 0.0 && l0 <= l_target && l_target <= 1.0, ErrorKind::kInvalidInput,
          "ifdwh_run needs 0 < l0 <= l_target <= 1");
  require(max_iters >= 0, ErrorKind::kInvalidInput, "max_iters must be nonnegative");
  HalleyState s{a0, b0, l0, 0};
  while (s.l < l_target) {
    if (s.iters >= max_iters) {
      std::ostringstream os;
      os.precision(17);
      os << "Halley iteration did not reach l_target = " << l_target << " in " << max_iters
         << " steps (l = " << s.l << ")";
      throw HalleyConvergenceError(os.str(), s.l, s.iters);
    }
    s = ifdwh_step(s);
  }
  return s;
}

double sign_error_bound(double kappa_bound, double l) {
  require(kappa_bound >= 1.0 && l > 0.0 && l <= 1.0, ErrorKind::kInvalidInput,
          "sign_error_bound needs kappa >= 1 and l in (0, 1]");
  return kappa_bound * (1.0 - l);
}

}  // namespace defeig
