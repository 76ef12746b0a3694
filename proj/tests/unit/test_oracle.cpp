#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "defeig/oracle.hpp"
#include "defeig/pseudospectrum.hpp"
#include "defeig/randomize.hpp"
#include "helpers.hpp"

using namespace defeig;
using namespace testing_util;

namespace {

HermitianPencil hermitian_noise(const HermitianPencil& p, double ea, double eb, std::mt19937_64& gen,
                                Matrix* e_out = nullptr, Matrix* f_out = nullptr) {
  Matrix e = oracle_ref::random_hermitian(p.n(), gen);
  Matrix f = oracle_ref::random_hermitian(p.n(), gen);
  e *= ea / oracle_ref::norm2(e);
  f *= eb / oracle_ref::norm2(f);
  if (e_out) *e_out = e;
  if (f_out) *f_out = f;
  return HermitianPencil(p.a() + e, p.b() + f);
}

}  // namespace

TEST(ReferenceSolve, DiagonalExample) {
  const OracleSolution o = reference_solve(diag_pencil({2, 1}, {1, 1}));
  ASSERT_EQ(o.eigenvalues.size(), 2u);
  EXPECT_NEAR(o.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(o.eigenvalues[1], 2.0, 1e-12);
  // columns scaled to alpha^2 + beta^2 = 1 (eigenvalue 1 is e2)
  EXPECT_NEAR(o.kappa_x, std::pow(2.5, 0.25), 1e-12);
  EXPECT_NEAR(std::abs(o.x_std(1, 0)), std::pow(2.0, -0.25), 1e-12);
  EXPECT_NEAR(std::abs(o.x_std(0, 1)), std::pow(5.0, -0.25), 1e-12);
}

TEST(ReferenceSolve, RejectsIndefinite) {
  EXPECT_DEFEIG_ERROR(reference_solve(diag_pencil({1, -1}, {1, -1})), ErrorKind::kPrecondition);
}

TEST(ReferenceSolve, RecoversGeneratorSpectrum) {
  const std::vector<double> spec{-0.8, -0.1, 0.0, 0.35, 0.9, 0.91};
  for (double kappa : {1.0, 30.0}) {
    const GeneratedPencil g = generate_test_pencil(6, spec, kappa, 61);
    const OracleSolution o = reference_solve(g.pencil);
    for (std::size_t i = 0; i < spec.size(); ++i)
      EXPECT_NEAR(o.eigenvalues[i], spec[i], 1e-10 * g.kappa_x * g.kappa_x);
  }
}

TEST(ReferenceSolve, AgreesWithCholeskyRoute) {
  std::mt19937_64 gen(62);
  for (int t = 0; t < 5; ++t) {
    const HermitianPencil p = random_definite(7, gen);
    const OracleSolution a = reference_solve(p);
    const OracleSolution b = reference_solve_b_definite(p);
    const std::vector<double> ind = oracle_ref::eig_b_posdef(p.a(), p.b());
    for (std::size_t i = 0; i < ind.size(); ++i) {
      const double scale = 1e-10 * std::max(1.0, std::abs(ind[i]));
      EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], scale);
      EXPECT_NEAR(a.eigenvalues[i], ind[i], 1e2 * scale * a.kappa_x);
    }
  }
}

TEST(ReferenceSolve, MobiusBackMapAndSelfConsistency) {
  std::mt19937_64 gen(63);
  for (int t = 0; t < 5; ++t) {
    // an indefinite B so the rotation matters
    std::vector<double> al, be;
    std::uniform_real_distribution<double> u(0.3, 2.6);
    for (int i = 0; i < 6; ++i) {
      const double phi = u(gen);
      al.push_back(std::cos(phi));
      be.push_back(std::sin(phi) - 0.2);
    }
    const Matrix q = oracle_ref::random_matrix(6, 6, gen) + 3.0 * eye(6);
    const HermitianPencil p(q.adjoint() * diag(al) * q, q.adjoint() * diag(be) * q);
    const OracleSolution o = reference_solve(p);
    const double c = std::cos(o.theta_rotation);
    const double s = std::sin(o.theta_rotation);
    const Matrix ar = -s * p.a() + c * p.b();
    const Matrix br = c * p.a() + s * p.b();
    std::vector<double> back;
    for (double mu : oracle_ref::eig_b_posdef(ar, br)) back.push_back((c - mu * s) / (s + mu * c));
    std::sort(back.begin(), back.end());
    const double pn = oracle_ref::block_norm(p.a(), p.b());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_LE(chordal_distance(back[i], o.eigenvalues[i]), 1e-9);
      const double lam = o.eigenvalues[i];
      EXPECT_LE(oracle_ref::smin(p.a() - lam * p.b()), 1e-8 * pn * std::sqrt(1 + lam * lam));
    }
  }
}

TEST(ReferenceSolve, StandardNormalizationAndDiagonality) {
  std::mt19937_64 gen(64);
  for (int t = 0; t < 5; ++t) {
    const HermitianPencil p = random_definite(6, gen);
    const OracleSolution o = reference_solve(p);
    const Matrix da = o.x_std.adjoint() * p.a() * o.x_std;
    const Matrix db = o.x_std.adjoint() * p.b() * o.x_std;
    const double tol = 1e-8 * o.kappa_x * o.kappa_x;
    EXPECT_LE(oracle_ref::norm2(da - Matrix(da.diagonal().asDiagonal())), tol);
    EXPECT_LE(oracle_ref::norm2(db - Matrix(db.diagonal().asDiagonal())), tol);
    for (Index i = 0; i < p.n(); ++i) {
      EXPECT_NEAR(o.alpha(i) * o.alpha(i) + o.beta(i) * o.beta(i), 1.0, 1e-10);
      EXPECT_NEAR(da(i, i).real(), o.alpha(i), tol);
    }
  }
}

TEST(ReferenceSolve, EigenvectorConditioningBound) {
  std::mt19937_64 gen(65);
  for (int t = 0; t < 10; ++t) {
    const HermitianPencil p = random_definite(6, gen);
    const OracleSolution o = reference_solve(p);
    const double gamma = crawford_lower_bound(p).gamma_lb;
    const double pn = pencil_norm(p);
    const double nx = oracle_ref::norm2(o.x_std);
    const double nxi = oracle_ref::norm2(o.x_std.inverse());
    EXPECT_LE(o.kappa_x, 1.01 * pn / gamma);
    EXPECT_LE(nx * nx, 1.01 / gamma);
    EXPECT_LE(nxi * nxi, 1.01 * pn * pn / gamma);
  }
}

TEST(BackwardResiduals, ExactIsZero) {
  const HermitianPencil p = diag_pencil({0.3, -2}, {1, 0.5});
  const RealVector la = (RealVector(2) << 0.3, -2).finished();
  const RealVector lb = (RealVector(2) << 1, 0.5).finished();
  const auto [ra, rb] = backward_residuals(p, eye(2), la, lb);
  EXPECT_LE(ra, 1e-12);
  EXPECT_LE(rb, 1e-12);
  EXPECT_DEFEIG_ERROR(backward_residuals(p, eye(3), la, lb), ErrorKind::kInvalidInput);
}

TEST(BackwardResiduals, LinearInPerturbation) {
  std::mt19937_64 gen(66);
  const HermitianPencil p = random_definite(6, gen);
  const OracleSolution o = reference_solve(p);
  const Matrix dx = oracle_ref::random_matrix(6, 6, gen);
  const double na = p.norm_a() * oracle_ref::norm2(o.x_std) * oracle_ref::norm2(dx);
  const auto [r1, s1] = backward_residuals(p, o.x_std + 1e-6 * dx, o.alpha, o.beta);
  const auto [r2, s2] = backward_residuals(p, o.x_std + 2e-6 * dx, o.alpha, o.beta);
  EXPECT_NEAR(r2 / r1, 2.0, 0.01);
  EXPECT_NEAR(s2 / s1, 2.0, 0.01);
  const double slope = r1 / 1e-6;
  EXPECT_LE(slope, 4 * 2 * na);
  EXPECT_GE(slope, na / 4 / 2 / 6);
}

TEST(ChordalMatch, Examples) {
  const std::vector<double> a{-1, 0.5, 3};
  EXPECT_EQ(chordal_match(a, a), 0.0);
  const std::vector<double> z{0}, o{1};
  EXPECT_NEAR(chordal_match(z, o), 1 / std::sqrt(2.0), 1e-15);
  const std::vector<double> two{0, 1};
  EXPECT_DEFEIG_ERROR(chordal_match(z, two), ErrorKind::kInvalidInput);
  const std::vector<double> unsorted{1, 0};
  EXPECT_DEFEIG_ERROR(chordal_match(unsorted, two), ErrorKind::kInvalidInput);
}

TEST(ChordalMatch, StewartBound) {
  std::mt19937_64 gen(67);
  const HermitianPencil p = random_definite(6, gen);
  const double gamma = crawford_lower_bound(p).gamma_lb;
  const std::vector<double> base = reference_solve(p).eigenvalues;
  std::uniform_real_distribution<double> frac(0.01, 0.6);
  for (int t = 0; t < 100; ++t) {
    const double ea = frac(gen) * gamma, eb = frac(gen) * gamma;
    const double s = std::hypot(ea, eb);
    if (s >= gamma) continue;
    const HermitianPencil q = hermitian_noise(p, ea, eb, gen);
    EXPECT_LE(chordal_match(base, reference_solve(q).eigenvalues), s / gamma * (1 + 1e-9));
  }
}

TEST(Stewart, EigenvectorBound) {
  std::mt19937_64 gen(68);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    const HermitianPencil p = random_definite(5, gen);
    const double gamma = crawford_lower_bound(p).gamma_lb;
    const HermitianPencil q = hermitian_noise(p, 1e-3 * gamma, 1e-3 * gamma, gen);
    const double s = std::hypot(1e-3 * gamma, 1e-3 * gamma);
    const double gq = crawford_lower_bound(q).gamma_lb;
    const OracleSolution op = reference_solve(p);
    const OracleSolution oq = reference_solve(q);
    for (Index i = 0; i < p.n(); ++i) {
      double delta = 1e300;
      for (Index j = 0; j < q.n(); ++j)
        if (j != i) delta = std::min(delta, chordal_distance(op.eigenvalues[i], oq.eigenvalues[j]));
      if (!(s / delta < gq)) continue;
      const Eigen::VectorXcd v = op.x_std.col(i);
      const Eigen::VectorXcd w = oq.x_std.col(i);
      const Complex c = w.dot(v) / w.squaredNorm();
      EXPECT_LE((c * w - v).norm() / v.norm(), s / (delta * gq) * (1 + 1e-6)) << t << ' ' << i;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Shattering, PerturbedEigenvaluesKeepTheirIntervals) {
  const std::vector<double> spec{-0.6, -0.2, 0.25, 0.7};
  const GeneratedPencil g = generate_test_pencil(4, spec, 2.0, 69);
  const double gamma = crawford_lower_bound(g.pencil).gamma_lb;
  const double eps = gamma / 50;
  ShatteringGrid grid;
  grid.z0 = -1.03;
  grid.omega = 0.1;
  grid.count = 22;
  grid.epsilon = eps;
  const std::vector<double> base = reference_solve(g.pencil).eigenvalues;
  ASSERT_TRUE(check_shattered(g.pencil, grid, eps, gamma, base).shattered);
  std::mt19937_64 gen(70);
  for (int t = 0; t < 20; ++t) {
    const double eta = 0.9 * eps / std::sqrt(2.0);
    const std::vector<double> moved = reference_solve(hermitian_noise(g.pencil, eta, eta, gen)).eigenvalues;
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(grid.interval_of(moved[i]), grid.interval_of(base[i]));
  }
}
