#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "defeig/linalg.hpp"
#include "defeig/oracle.hpp"
#include "defeig/randomize.hpp"
#include "helpers.hpp"

using namespace defeig;
using namespace testing_util;

TEST(Gue, ScalarVariance) {
  RandomStream rng(31);
  double s2 = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Matrix z = sample_gue(1, rng);
    EXPECT_EQ(z(0, 0).imag(), 0.0);
    s2 += std::norm(z(0, 0));
  }
  EXPECT_NEAR(s2 / trials, 1.0, 0.05);
}

TEST(Gue, DeterministicAndHermitian) {
  const Matrix a = sample_gue(7, 99);
  const Matrix b = sample_gue(7, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, a.adjoint());
  EXPECT_NE(a, sample_gue(7, 100));
  EXPECT_DEFEIG_ERROR(sample_gue(0, 1), ErrorKind::kInvalidInput);
}

TEST(Gue, OffDiagonalVariance) {
  RandomStream rng(32);
  const Index n = 40;
  double off = 0.0;
  double diag_sum = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const Matrix z = sample_gue(n, rng);
    for (Index i = 0; i < n; ++i) {
      diag_sum += std::norm(z(i, i));
      for (Index j = i + 1; j < n; ++j) off += std::norm(z(i, j));
    }
  }
  // E|Z_ij|^2 = 1/n for i != j, E Z_ii^2 = 1/n
  EXPECT_NEAR(off / (trials * n * (n - 1) / 2.0) * n, 1.0, 0.05);
  EXPECT_NEAR(diag_sum / (trials * n) * n, 1.0, 0.1);
}

TEST(Gue, NormBound) {
  RandomStream rng(33);
  int exceed = 0;
  for (int t = 0; t < 200; ++t) exceed += oracle_ref::hermitian_norm2(sample_gue(64, rng)) >= 4 + std::sqrt(2.0);
  EXPECT_EQ(exceed, 0);
}

TEST(Diagonal, SupportDeterminismTail) {
  const DiagonalDensitySpec u = DiagonalDensitySpec::uniform(-1, 1);
  const Matrix d = sample_diagonal(3, u, 5);
  EXPECT_EQ(d, sample_diagonal(3, u, 5));
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      if (i == j) {
        EXPECT_LE(std::abs(d(i, i).real()), 1.0);
        EXPECT_EQ(d(i, i).imag(), 0.0);
      } else {
        EXPECT_EQ(d(i, j), Complex(0.0, 0.0));
      }
    }
  EXPECT_DEFEIG_ERROR(sample_diagonal(0, u, 1), ErrorKind::kInvalidInput);

  const DiagonalDensitySpec g = DiagonalDensitySpec::standard_normal(5.0);
  RandomStream rng(34);
  int exceed = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix m = sample_diagonal(100, g, rng);
    exceed += m.diagonal().cwiseAbs().maxCoeff() > g.m_rho;
  }
  EXPECT_LE(exceed, 1);
  EXPECT_LT(2 * 100 * oracle_ref::normal_tail(5.0), 0.01);
}

TEST(Diagonal, ScaledNormalDefaults) {
  const DiagonalDensitySpec s = DiagonalDensitySpec::scaled_normal(16);
  EXPECT_NEAR(s.m_rho, std::sqrt(4 * std::log(16.0) / 16), 1e-15);
  EXPECT_GT(s.sup_density, 0.0);
  EXPECT_TRUE(std::isfinite(s.sup_density));
}

TEST(Perturb, ZeroMuIsIdentity) {
  std::mt19937_64 gen(35);
  const HermitianPencil p = random_definite(4, gen);
  PerturbationSpec s;
  s.mu = 0.0;
  s.seed = 1;
  const PerturbedPencil q = perturb(p, s);
  EXPECT_EQ(q.pencil.a(), p.a());
  EXPECT_EQ(q.pencil.b(), p.b());
}

TEST(Perturb, DifferenceIsHermitianAndRecorded) {
  std::mt19937_64 gen(36);
  const HermitianPencil p = random_definite(6, gen);
  for (PerturbationKind k : {PerturbationKind::kGue, PerturbationKind::kDiagonal}) {
    PerturbationSpec s;
    s.kind = k;
    s.mu = 1e-3;
    s.seed = 77;
    const PerturbedPencil q = perturb(p, s);
    const Matrix v1 = (q.pencil.a() - p.a()) / s.mu;
    const Matrix v2 = (q.pencil.b() - p.b()) / s.mu;
    EXPECT_LE(linalg::hermitian_defect(v1), 1e-12);
    EXPECT_NEAR(q.record.norm_v1, oracle_ref::norm2(v1), 1e-9 * q.record.norm_v1);
    EXPECT_NEAR(q.record.norm_v2, oracle_ref::norm2(v2), 1e-9 * q.record.norm_v2);
    EXPECT_GT((v1 - v2).norm(), 0.1);  // independent substreams
    if (k == PerturbationKind::kDiagonal) {
      EXPECT_LE((v1 - Matrix(v1.diagonal().asDiagonal())).norm(), 1e-9);
    }
  }
}

TEST(Perturb, PreservesDefinitenessBelowBound) {
  const std::vector<double> spec{-0.9, -0.2, 0.3, 0.6, 0.95};
  const GeneratedPencil g = generate_test_pencil(5, spec, 2.0, 37);
  const double s = std::max(g.pencil.norm_a(), g.pencil.norm_b());
  const HermitianPencil p(g.pencil.a() / s, g.pencil.b() / s);
  const double gamma = crawford_lower_bound(p).gamma_lb;
  ASSERT_GT(gamma, 0.0);
  for (Seed t = 0; t < 100; ++t) {
    PerturbationSpec sp;
    sp.mu = 0.999 * gamma / (12 * std::sqrt(2.0));
    sp.seed = t;
    EXPECT_TRUE(is_definite(perturb(p, sp).pencil).definite) << t;
  }
}

TEST(ShatteringGridBuild, PrintedExample) {
  const GridBuild b = build_shattering_grid(4, 1e-2, 0.5, 1);
  EXPECT_NEAR(b.grid.omega, 2.4414e-10, 1e-14);
  EXPECT_NEAR(static_cast<double>(b.grid.count), 1.97e13, 0.01e13);
  EXPECT_NEAR(b.grid.epsilon, 9.93e-21, 0.01e-21);
  const double edge = 3.0 * 16 / (2 * 1e-2);
  EXPECT_LT(b.grid.z0, -edge);
  EXPECT_GT(b.grid.z0, -edge - b.grid.omega);
  EXPECT_GE(b.grid.last(), edge);
  EXPECT_EQ(b.grid.point(0), b.grid.z0);
  EXPECT_TRUE(b.within_theory_bound);
  EXPECT_EQ(build_shattering_grid(4, 1e-2, 0.5, 1).grid.z0, b.grid.z0);
}

TEST(ShatteringGridBuild, WarningsAndErrors) {
  const GridBuild b = build_shattering_grid(3, 0.5, 0.5, 1);
  EXPECT_FALSE(b.within_theory_bound);
  EXPECT_FALSE(b.warnings.empty());
  EXPECT_DEFEIG_ERROR(build_shattering_grid(3, 0.0, 0.5, 1), ErrorKind::kInvalidInput);
  EXPECT_DEFEIG_ERROR(build_shattering_grid(3, 1e-3, -1.0, 1), ErrorKind::kInvalidInput);
}

TEST(ShatteringGridBuild, NoDriftAcrossIndexRange) {
  const ShatteringGrid g = build_shattering_grid(4, 1e-2, 0.5, 2).grid;
  for (std::uint64_t j : {std::uint64_t{0}, std::uint64_t{12345}, g.count / 3, g.count / 2, g.count - 2}) {
    const double d = g.point(j + 1) - g.point(j);
    const double scale = std::abs(g.z0) + static_cast<double>(j + 1) * g.omega;
    EXPECT_NEAR(d, g.omega, 2 * std::numeric_limits<double>::epsilon() * scale) << j;
    const double direct = g.z0 + static_cast<double>(j) * g.omega;
    EXPECT_EQ(g.point(j), direct);
  }
}

TEST(PracticalGrid, CoversInterval) {
  const ShatteringGrid g = practical_grid(-1.0, 1.0, 1e-3, 1e-6, 5);
  EXPECT_LE(g.z0, -1.0);
  EXPECT_GT(g.z0, -1.0 - 1e-3);
  EXPECT_GE(g.last(), 1.0);
  EXPECT_EQ(g.z0, practical_grid(-1.0, 1.0, 1e-3, 1e-6, 5).z0);
}

TEST(Generator, ForcedIdentity) {
  const std::vector<double> e{1, 2};
  const GeneratedPencil g = pencil_from_factors(eye(2), e);
  EXPECT_EQ(g.pencil.a(), diag({1, 2}));
  EXPECT_EQ(g.pencil.b(), eye(2));
}

TEST(Generator, DefiniteExactConditionAndErrors) {
  const std::vector<double> e{-0.5, 0.0, 0.5, 0.7};
  for (double kappa : {1.0, 10.0, 1000.0}) {
    const GeneratedPencil g = generate_test_pencil(4, e, kappa, 8);
    EXPECT_GT(linalg::lambda_min(g.pencil.b()), 0.0);
    const Eigen::VectorXd sv = oracle_ref::svals(g.x);
    EXPECT_NEAR(sv(0) / sv(sv.size() - 1), kappa, 1e-9 * kappa);
    EXPECT_NEAR(g.kappa_x, kappa, 1e-9 * kappa);
  }
  EXPECT_DEFEIG_ERROR(generate_test_pencil(3, e, 1.0, 1), ErrorKind::kInvalidInput);
  EXPECT_DEFEIG_ERROR(generate_test_pencil(4, e, 0.5, 1), ErrorKind::kInvalidInput);
}

TEST(Generator, RepeatedEigenvaluePresetRecovered) {
  const std::vector<double> e = repeated_eigenvalue_preset(10, 3);
  EXPECT_EQ(std::count(e.begin(), e.end(), 1.0), 2);
  for (double kappa : {1.0, 10.0}) {
    const GeneratedPencil g = generate_test_pencil(10, e, kappa, 3);
    std::vector<double> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<double> got = reference_solve(g.pencil).eigenvalues;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      EXPECT_NEAR(got[i], sorted[i], 1e-10 * kappa * kappa) << i;
  }
}

TEST(CrawfordUnderNoise, PureNoiseDecaySmall) {
  const Index n = 20;
  double sum = 0.0;
  const int trials = 40;
  const HermitianPencil zero(Matrix::Zero(n, n), Matrix::Zero(n, n));
  for (int t = 0; t < trials; ++t) {
    PerturbationSpec s;
    s.mu = 1.0;
    s.seed = 500 + t;
    sum += crawford_lower_bound(perturb(zero, s).pencil).gamma_lb;
  }
  EXPECT_LE(sum / trials, std::sqrt(std::numbers::pi / n));
}

TEST(CrawfordUnderNoise, RepeatedEigenvalueSplits) {
  const std::vector<double> e = repeated_eigenvalue_preset(10, 3);
  const GeneratedPencil g = generate_test_pencil(10, e, 1.0, 3);
  for (Seed t = 0; t < 20; ++t) {
    PerturbationSpec s;
    s.mu = 1e-6;
    s.seed = t;
    EXPECT_GT(min_eigenvalue_gap(reference_solve(perturb(g.pencil, s).pencil).eigenvalues), 0.0);
  }
}
