#pragma once

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "defeig/error.hpp"
#include "defeig/pencil.hpp"
#include "oracles.hpp"

namespace testing_util {

using defeig::Complex;
using defeig::HermitianPencil;
using defeig::Index;
using defeig::Matrix;

inline Matrix diag(const std::vector<double>& d) {
  Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return m;
}

inline Matrix eye(Index n) { return Matrix::Identity(n, n); }

inline HermitianPencil diag_pencil(const std::vector<double>& a, const std::vector<double>& b) {
  return HermitianPencil(diag(a), diag(b));
}

/// Random definite pencil (X^H L X, X^H X) from a test-local generator.
inline HermitianPencil random_definite(Index n, std::mt19937_64& gen) {
  const Matrix x = oracle_ref::random_matrix(n, n, gen);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix l = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) l(i, i) = u(gen);
  return HermitianPencil(x.adjoint() * l * x, x.adjoint() * x);
}

}  // namespace testing_util

#define EXPECT_DEFEIG_ERROR(stmt, expected_kind)                                  \
  do {                                                                            \
    try {                                                                         \
      stmt;                                                                       \
      ADD_FAILURE() << "expected defeig::Error";                                  \
    } catch (const defeig::Error& e) {                                            \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                             \
    }                                                                             \
  } while (0)
