#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "defeig/rrf.hpp"
#include "helpers.hpp"

using namespace defeig;
using namespace testing_util;

namespace {

double unitarity(const Matrix& u) {
  return oracle_ref::norm2(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

Matrix product(const std::vector<Matrix>& ms, const std::vector<int>& ex) {
  Matrix p = Matrix::Identity(ms[0].rows(), ms[0].cols());
  for (std::size_t i = 0; i < ms.size(); ++i) p = p * (ex[i] > 0 ? ms[i] : Matrix(ms[i].inverse()));
  return p;
}

Matrix reconstruct(const RRFResult& r) {
  Matrix p = r.u;
  for (std::size_t i = 0; i < r.r_factors.size(); ++i)
    p = p * (r.exponents[i] > 0 ? r.r_factors[i] : Matrix(r.r_factors[i].inverse()));
  return p * r.v;
}

bool is_upper(const Matrix& m, double tol) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > tol) return false;
  return true;
}

// Kolmogorov distribution tail, P[K > x].
double kolmogorov_p(double x) {
  double s = 0.0;
  for (int k = 1; k < 100; ++k) s += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

TEST(Rurv, Identity) {
  for (TriangularSide side : {TriangularSide::kUpper, TriangularSide::kLower}) {
    const RurvResult r = rurv(eye(5), side, 1);
    for (Index i = 0; i < 5; ++i) EXPECT_NEAR(std::abs(r.t(i, i)), 1.0, 1e-12);
    EXPECT_LE(oracle_ref::norm2(r.u * r.t * r.v - eye(5)), 1e-12);
  }
}

TEST(Rurv, RankOne) {
  const RurvResult r = rurv(diag({5, 0}), TriangularSide::kUpper, 2);
  int big = 0;
  for (Index i = 0; i < 2; ++i) big += std::abs(r.t(i, i)) >= 1e-8;
  EXPECT_EQ(big, 1);
  const Eigen::VectorXd sv = oracle_ref::svals(r.t);
  EXPECT_NEAR(sv(0), 5.0, 1e-10);
  EXPECT_NEAR(sv(1), 0.0, 1e-10);
}

TEST(Rurv, FactorizationShapes) {
  std::mt19937_64 gen(41);
  const Matrix m = oracle_ref::random_matrix(9, 9, gen);
  const RurvResult up = rurv(m, TriangularSide::kUpper, 3);
  EXPECT_TRUE(is_upper(up.t, 1e-12));
  EXPECT_LE(oracle_ref::norm2(up.u * up.t * up.v - m), 1e-10 * oracle_ref::norm2(m));
  const RurvResult lo = rurv(m, TriangularSide::kLower, 3);
  EXPECT_TRUE(is_upper(lo.t.transpose(), 1e-12));
  EXPECT_LE(oracle_ref::norm2(lo.u * lo.t * lo.v - m), 1e-10 * oracle_ref::norm2(m));
  EXPECT_LE(unitarity(up.u), 1e-10);
  EXPECT_LE(unitarity(up.v), 1e-10);
  EXPECT_LE(unitarity(lo.u), 1e-10);
}

TEST(Rurv, DiagonalTracksSingularValues) {
  std::mt19937_64 gen(42);
  const Index n = 16;
  for (Seed s = 0; s < 100; ++s) {
    const Matrix m = oracle_ref::random_matrix(n, n, gen);
    const RurvResult r = rurv(m, TriangularSide::kUpper, s);
    std::vector<double> d;
    for (Index i = 0; i < n; ++i) d.push_back(std::abs(r.t(i, i)));
    std::sort(d.rbegin(), d.rend());
    const Eigen::VectorXd sv = oracle_ref::svals(m);
    for (Index i = 0; i < n; ++i) {
      EXPECT_GE(d[i], sv(i) / (20.0 * n)) << s << ' ' << i;
      EXPECT_LE(d[i], 20.0 * n * sv(i)) << s << ' ' << i;
    }
  }
}

TEST(Rurv, HaarFirstColumn) {
  const Index n = 8;
  const int samples = 10000;
  std::vector<std::vector<double>> w(n);
  RandomStream rng(43);
  for (int t = 0; t < samples; ++t) {
    const RurvResult r = rurv(eye(n), TriangularSide::kUpper, rng);
    for (Index i = 0; i < n; ++i) w[i].push_back(std::norm(r.v(i, 0)));
  }
  // marginal of Dirichlet(1,...,1) is Beta(1, n - 1)
  for (Index i = 0; i < n; ++i) {
    std::sort(w[i].begin(), w[i].end());
    double d = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double f = 1.0 - std::pow(1.0 - w[i][k], static_cast<double>(n - 1));
      d = std::max({d, std::abs(f - static_cast<double>(k) / samples),
                    std::abs(f - static_cast<double>(k + 1) / samples)});
    }
    EXPECT_GT(kolmogorov_p(d * std::sqrt(static_cast<double>(samples))), 0.001) << i;
  }
}

TEST(Grurv, SingleIdentity) {
  const RRFResult r = grurv({eye(4)}, {+1}, 5);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(r.r_factors[0](i, i)), 1.0, 1e-12);
  EXPECT_LE(oracle_ref::norm2(reconstruct(r) - eye(4)), 1e-12);
}

TEST(Grurv, ScaledProjector) {
  const Matrix p = diag({1, 1, 0});
  const RRFResult r = grurv({2.0 * eye(3), 2.0 * p}, {-1, +1}, 6);
  EXPECT_EQ(rank_from_ratios(r.r_factors[0], r.r_factors[1], 1e-6), 2);
  EXPECT_LE(oracle_ref::norm2(reconstruct(r) - p), 1e-12);
}

TEST(Grurv, InverseProductReconstruction) {
  std::mt19937_64 gen(44);
  for (Seed s = 0; s < 10; ++s) {
    const Matrix a1 = oracle_ref::random_matrix(8, 8, gen);
    const Matrix a2 = oracle_ref::random_matrix(8, 8, gen);
    const RRFResult r = grurv({a1, a2}, {-1, +1}, s);
    const Matrix ref = a1.inverse() * a2;
    EXPECT_LE(oracle_ref::norm2(reconstruct(r) - ref), 1e-8 * oracle_ref::norm2(ref));
    for (const Matrix& f : r.r_factors) EXPECT_TRUE(is_upper(f, 1e-12));
    EXPECT_LE(unitarity(r.u), 1e-10);
    EXPECT_LE(unitarity(r.v), 1e-10);
  }
}

TEST(Grurv, MixedExponentsUpToThree) {
  std::mt19937_64 gen(45);
  const std::vector<std::vector<int>> patterns{{+1}, {-1}, {+1, +1}, {+1, -1}, {-1, -1},
                                               {+1, -1, +1}, {-1, +1, -1}, {-1, -1, +1}};
  for (Index n : {3, 8, 16}) {
    for (const auto& ex : patterns) {
      std::vector<Matrix> ms;
      for (std::size_t i = 0; i < ex.size(); ++i) ms.push_back(oracle_ref::random_matrix(n, n, gen) + 3.0 * eye(n));
      const RRFResult r = grurv(ms, ex, 7);
      const Matrix ref = product(ms, ex);
      EXPECT_LE(oracle_ref::norm2(reconstruct(r) - ref), 1e-8 * oracle_ref::norm2(ref)) << n;
    }
  }
}

TEST(Grurv, BreakdownOnSingularInverse) {
  EXPECT_DEFEIG_ERROR(grurv({diag({1, 0, 1}), eye(3)}, {-1, +1}, 1), ErrorKind::kBreakdown);
  EXPECT_DEFEIG_ERROR(grurv({eye(3), diag({1, 0, 1})}, {+1, -1}, 1), ErrorKind::kBreakdown);
  EXPECT_DEFEIG_ERROR(grurv({eye(3)}, {+1, -1}, 1), ErrorKind::kInvalidInput);
}

TEST(RankFromRatios, Examples) {
  EXPECT_EQ(rank_from_ratios(eye(2), diag({1, 1e-12}), 0.5), 1);
  EXPECT_EQ(rank_from_ratios(eye(5), eye(5), 0.5), 5);
  EXPECT_DEFEIG_ERROR(rank_from_ratios(diag({1, 0}), eye(2), 0.5), ErrorKind::kNumericalRank);
}

TEST(RankFromRatios, ProjectorThroughGrurv) {
  std::mt19937_64 gen(46);
  const Index n = 16;
  for (Seed s = 0; s < 50; ++s) {
    const Index k = 1 + static_cast<Index>(s % (n - 1));
    const Matrix q = oracle_ref::random_unitary(n, gen).leftCols(k);
    const Matrix p = q * q.adjoint();
    const Matrix b = oracle_ref::random_matrix(n, n, gen) + 4.0 * eye(n);
    const Matrix a = b * (2.0 * p - eye(n));  // B^{-1} A = sign
    const RRFResult r = grurv({2.0 * b, a + b}, {-1, +1}, s);
    const Eigen::VectorXd sv = oracle_ref::svals(p);
    Index true_rank = 0;
    for (Index i = 0; i < n; ++i) true_rank += sv(i) > 0.5;
    ASSERT_EQ(true_rank, k);
    for (double thr : {1e-6, 1e-4, 1e-3}) {
      EXPECT_EQ(rank_from_ratios(r.r_factors[0], r.r_factors[1], thr), k) << s << ' ' << thr;
    }
  }
}

// Haar mixing leaves the leading ratios of a rank-k projector near
// sqrt(k/n), so a threshold of 0.5 under-counts.
TEST(RankFromRatios, HalfThresholdUndercounts) {
  std::mt19937_64 gen(48);
  const Index n = 16;
  int misses = 0;
  for (Seed s = 0; s < 50; ++s) {
    const Index k = 1 + static_cast<Index>(s % (n - 1));
    const Matrix q = oracle_ref::random_unitary(n, gen).leftCols(k);
    const Matrix b = oracle_ref::random_matrix(n, n, gen) + 4.0 * eye(n);
    const Matrix a = b * (2.0 * q * q.adjoint() - eye(n));
    const RRFResult r = grurv({2.0 * b, a + b}, {-1, +1}, s);
    const Index got = rank_from_ratios(r.r_factors[0], r.r_factors[1], 0.5);
    EXPECT_LE(got, k);
    misses += got != k;
  }
  EXPECT_GT(misses, 0);
}

TEST(RankFromRatios, GapOfMillion) {
  std::mt19937_64 gen(47);
  const Index n = 12;
  int hits = 0;
  for (Seed s = 0; s < 100; ++s) {
    const Index k = 1 + static_cast<Index>(s % (n - 1));
    std::vector<double> d(n);
    for (Index i = 0; i < n; ++i) d[i] = i < k ? 1.0 + 0.5 * static_cast<double>(i) / n : 1e-6 * (1.0 - 0.5 * static_cast<double>(i) / n);
    const Matrix m = oracle_ref::random_unitary(n, gen) * diag(d) * oracle_ref::random_unitary(n, gen);
    const RRFResult r = grurv({eye(n), m}, {-1, +1}, s);
    hits += rank_from_ratios(r.r_factors[0], r.r_factors[1], 1e-3) == k;
  }
  EXPECT_GE(hits, 99);
}
