#pragma once

#include <vector>

#include "defeig/rng.hpp"
#include "defeig/types.hpp"

namespace defeig {

enum class TriangularSide { kUpper, kLower };

/// M = U * T * V with T triangular on the requested side and V Haar unitary.
struct RurvResult {
  Matrix u;
  Matrix t;
  Matrix v;
};

RurvResult rurv(const Matrix& m, TriangularSide side, RandomStream& rng);
RurvResult rurv(const Matrix& m, TriangularSide side, Seed seed);

/// A_1^{m_1} ... A_k^{m_k} = U * R_1^{m_1} ... R_k^{m_k} * V, all R_i upper triangular.
struct RRFResult {
  Matrix u;
  std::vector<Matrix> r_factors;
  Matrix v;
  std::vector<int> exponents;
};

RRFResult grurv(const std::vector<Matrix>& matrices, const std::vector<int>& exponents,
                RandomStream& rng);
RRFResult grurv(const std::vector<Matrix>& matrices, const std::vector<int>& exponents, Seed seed);

/// |r2(i,i) / r1(i,i)| for each i.
RealVector diagonal_ratios(const Matrix& r1, const Matrix& r2);

/// Number of i with |r2(i,i) / r1(i,i)| >= threshold.
Index rank_from_ratios(const Matrix& r1, const Matrix& r2, double threshold);

}  // namespace defeig
