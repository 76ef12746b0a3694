#include "defeig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"

namespace defeig {

namespace {

// Generalized eigenvectors of (A', B') with B' > 0, as columns.
Matrix cholesky_eigenvectors(const Matrix& a_rot, const Matrix& b_rot) {
  Eigen::LLT<Matrix> llt(b_rot);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::kNumericalRank, "oracle: Cholesky of the rotated B failed");
  }
  const auto l = llt.matrixL();
  Matrix c = l.solve(a_rot);
  c = l.solve(c.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(c));
  if (es.info() != Eigen::Success) fail(ErrorKind::kConvergence, "oracle: eigensolver failed");
  return llt.matrixU().solve(es.eigenvectors());
}

OracleSolution finish(const HermitianPencil& p, Matrix x, double theta) {
  const Index n = p.n();
  RealVector alpha(n);
  RealVector beta(n);
  for (Index j = 0; j < n; ++j) {
    double a = (x.col(j).adjoint() * p.a() * x.col(j))(0).real();
    double b = (x.col(j).adjoint() * p.b() * x.col(j))(0).real();
    const double s = 1.0 / std::sqrt(std::sqrt(a * a + b * b));
    x.col(j) *= s;
    alpha(j) = a * s * s;
    beta(j) = b * s * s;
  }

  std::vector<double> lam(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    lam[static_cast<std::size_t>(j)] =
        beta(j) != 0.0 ? alpha(j) / beta(j)
                       : std::copysign(std::numeric_limits<double>::infinity(), alpha(j));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return lam[static_cast<std::size_t>(i)] < lam[static_cast<std::size_t>(j)];
  });

  OracleSolution out;
  out.x_std.resize(n, n);
  out.alpha.resize(n);
  out.beta.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.x_std.col(j) = x.col(src);
    out.alpha(j) = alpha(src);
    out.beta(j) = beta(src);
    out.eigenvalues.push_back(lam[static_cast<std::size_t>(src)]);
  }
  const RealVector sv = linalg::singular_values(out.x_std);
  out.kappa_x = sv(0) / sv(n - 1);
  out.theta_rotation = theta;
  return out;
}

}  // namespace

OracleSolution reference_solve(const HermitianPencil& p) {
  const CrawfordEstimate est = crawford_lower_bound(p);
  require(est.gamma_lb > 0.0, ErrorKind::kPrecondition, "oracle: pencil is not definite");
  const double th = est.theta_star;
  const double c = std::cos(th);
  const double s = std::sin(th);
  const Matrix b_rot = linalg::hermitian_part(c * p.a() + s * p.b());
  const Matrix a_rot = linalg::hermitian_part(-s * p.a() + c * p.b());
  return finish(p, cholesky_eigenvectors(a_rot, b_rot), th);
}

OracleSolution reference_solve_b_definite(const HermitianPencil& p) {
  return finish(p, cholesky_eigenvectors(p.a(), p.b()), std::numbers::pi / 2);
}

std::pair<double, double> backward_residuals(const HermitianPencil& p, const Matrix& x,
                                             const RealVector& lambda_a,
                                             const RealVector& lambda_b) {
  const Index n = p.n();
  require(x.rows() == n && x.cols() == n && lambda_a.size() == n && lambda_b.size() == n,
          ErrorKind::kInvalidInput, "backward_residuals: dimension mismatch");
  const Matrix ra = x.adjoint() * p.a() * x - lambda_a.cast<Complex>().asDiagonal().toDenseMatrix();
  const Matrix rb = x.adjoint() * p.b() * x - lambda_b.cast<Complex>().asDiagonal().toDenseMatrix();
  return {linalg::spectral_norm(ra), linalg::spectral_norm(rb)};
}

std::pair<double, double> backward_residuals(const HermitianPencil& p,
                                             const DiagonalizationResult& result) {
  return backward_residuals(p, result.x, result.lambda_a, result.lambda_b);
}

double chordal_match(std::span<const double> eigs1, std::span<const double> eigs2) {
  require(eigs1.size() == eigs2.size(), ErrorKind::kInvalidInput,
          "chordal_match: lists differ in length");
  require(std::is_sorted(eigs1.begin(), eigs1.end()) && std::is_sorted(eigs2.begin(), eigs2.end()),
          ErrorKind::kInvalidInput, "chordal_match: lists must be sorted");
  double worst = 0.0;
  for (std::size_t i = 0; i < eigs1.size(); ++i) {
    worst = std::max(worst, chordal_distance(eigs1[i], eigs2[i]));
  }
  return worst;
}

}  // namespace defeig
