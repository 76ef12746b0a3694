#pragma once

#include "defeig/error.hpp"
#include "defeig/types.hpp"

namespace defeig {

/// Implicit iterate (A_j, B_j): the represented matrix is B_j^{-1} A_j,
/// whose eigenvalues lie in [-1, -l) U (l, 1].
struct HalleyState {
  Matrix a_mat;
  Matrix b_mat;
  double l = 1.0;
  int iters = 0;
};

struct HalleyCoefficients {
  double gamma_coef = 0.0;
  double a = 1.0;
  double b = 3.0;
  double c = 3.0;
};

/// Dynamic weights for lower bound l in (0, 1].
HalleyCoefficients halley_coefficients(double l);

/// f(x) = x (a x^2 + b) / (c x^2 + 1).
double halley_map(double x, const HalleyCoefficients& w);

/// l_{j+1} = f_l(l), evaluated as 1 - (1 - l) g(l) once l > 0.99 and clamped to 1.
double next_lower_bound(double l);

/// Steps of the scalar recurrence needed to lift l0 to l_target.
int scalar_iteration_count(double l0, double l_target, int max_iters = 1000);

/// One inverse-free step: B_{j+1}^{-1} A_{j+1} = f(B_j^{-1} A_j).
HalleyState ifdwh_step(const HalleyState& state);

/// Same as ifdwh_step with explicit weights (used for extra polishing steps at l = 1).
HalleyState ifdwh_step(const HalleyState& state, const HalleyCoefficients& w);

class HalleyConvergenceError : public Error {
 public:
  HalleyConvergenceError(const std::string& what, double final_l, int iters)
      : Error(ErrorKind::kConvergence, what), final_l_(final_l), iters_(iters) {}
  double final_l() const { return final_l_; }
  int iters() const { return iters_; }

 private:
  double final_l_;
  int iters_;
};

/// Iterates until l >= l_target; throws HalleyConvergenceError after max_iters.
HalleyState ifdwh_run(const Matrix& a0, const Matrix& b0, double l0, double l_target,
                      int max_iters = 40);

/// kappa_bound * (1 - l): bound on ||B^{-1}A - sign(B^{-1}A)||_2.
double sign_error_bound(double kappa_bound, double l);

}  // namespace defeig
