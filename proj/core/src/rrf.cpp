#include "defeig/rrf.hpp"

#include <cmath>
#include <sstream>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"

namespace defeig {

RurvResult rurv(const Matrix& m, TriangularSide side, RandomStream& rng) {
  require(m.rows() == m.cols(), ErrorKind::kInvalidInput, "rurv needs a square matrix");
  const Matrix v = linalg::haar_unitary(m.rows(), rng);
  const Matrix a_hat = m * v.adjoint();
  if (side == TriangularSide::kUpper) {
    linalg::QR f = linalg::qr(a_hat);
    return {std::move(f.q), std::move(f.r), v};
  }
  linalg::QL f = linalg::ql(a_hat);
  return {std::move(f.q), std::move(f.l), v};
}

RurvResult rurv(const Matrix& m, TriangularSide side, Seed seed) {
  RandomStream rng(seed);
  return rurv(m, side, rng);
}

namespace {

void check_invertible(const Matrix& r, double norm, std::size_t which) {
  for (Index i = 0; i < r.rows(); ++i) {
    if (!(std::abs(r(i, i)) >= 1e-14 * norm)) {
      std::ostringstream os;
      os << "grurv: factor " << which + 1 << " under exponent -1 is numerically singular (|R("
         << i << "," << i << ")| = " << std::abs(r(i, i)) << ")";
      fail(ErrorKind::kBreakdown, os.str());
    }
  }
}

}  // namespace

RRFResult grurv(const std::vector<Matrix>& matrices, const std::vector<int>& exponents,
                RandomStream& rng) {
  require(!matrices.empty() && matrices.size() == exponents.size(), ErrorKind::kInvalidInput,
          "grurv needs one exponent per matrix");
  const Index n = matrices.front().rows();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    require(matrices[i].rows() == n && matrices[i].cols() == n, ErrorKind::kInvalidInput,
            "grurv matrices must be square and of equal size");
    require(exponents[i] == 1 || exponents[i] == -1, ErrorKind::kInvalidInput,
            "grurv exponents must be +1 or -1");
  }

  const std::size_t k = matrices.size();
  RRFResult out;
  out.exponents = exponents;
  out.r_factors.resize(k);

  Matrix u_cur;
  const Matrix& last = matrices[k - 1];
  if (exponents[k - 1] == 1) {
    RurvResult f = rurv(last, TriangularSide::kUpper, rng);
    u_cur = std::move(f.u);
    out.r_factors[k - 1] = std::move(f.t);
    out.v = std::move(f.v);
  } else {
    RurvResult f = rurv(last.adjoint(), TriangularSide::kLower, rng);
    u_cur = std::move(f.u);
    out.r_factors[k - 1] = f.t.adjoint();
    out.v = std::move(f.v);
    check_invertible(out.r_factors[k - 1], linalg::spectral_norm(last), k - 1);
  }

  for (std::size_t idx = k - 1; idx-- > 0;) {
    const Matrix& a = matrices[idx];
    if (exponents[idx] == 1) {
      linalg::QR f = linalg::qr(a * u_cur);
      u_cur = std::move(f.q);
      out.r_factors[idx] = std::move(f.r);
    } else {
      linalg::RQ f = linalg::rq(u_cur.adjoint() * a);
      u_cur = f.q.adjoint();
      out.r_factors[idx] = std::move(f.r);
      check_invertible(out.r_factors[idx], linalg::spectral_norm(a), idx);
    }
  }
  out.u = std::move(u_cur);
  return out;
}

RRFResult grurv(const std::vector<Matrix>& matrices, const std::vector<int>& exponents, Seed seed) {
  RandomStream rng(seed);
  return grurv(matrices, exponents, rng);
}

RealVector diagonal_ratios(const Matrix& r1, const Matrix& r2) {
  require(r1.rows() == r2.rows() && r1.cols() == r2.cols() && r1.rows() == r1.cols(),
          ErrorKind::kInvalidInput, "ratio factors must be square and of equal size");
  const Index n = r1.rows();
  RealVector out(n);
  for (Index i = 0; i < n; ++i) {
    const double d = std::abs(r1(i, i));
    require(d > 0.0, ErrorKind::kNumericalRank, "zero diagonal entry in the denominator factor");
    out(i) = std::abs(r2(i, i)) / d;
  }
  return out;
}

Index rank_from_ratios(const Matrix& r1, const Matrix& r2, double threshold) {
  require(threshold > 0.0, ErrorKind::kInvalidInput, "rank threshold must be positive");
  const RealVector q = diagonal_ratios(r1, r2);
  return (q.array() >= threshold).count();
}

}  // namespace defeig
