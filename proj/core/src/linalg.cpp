#include "defeig/linalg.hpp"

#include <algorithm>

namespace defeig::linalg {

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double sigma_min(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const RealVector s = singular_values(m);
  return s(s.size() - 1);
}

double hermitian_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double lambda_min(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lambda_max(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

double hermitian_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return spectral_norm(m - m.adjoint());
}

QR qr(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> f(m);
  QR out;
  out.q = f.householderQ() * Matrix::Identity(m.rows(), m.rows());
  out.r = f.matrixQR().triangularView<Eigen::Upper>();
  return out;
}

TrailingQ householder_q_columns(const Matrix& tall, Index first, Index count) {
  Eigen::HouseholderQR<Matrix> f(tall);
  const Index rows = tall.rows();
  TrailingQ out;
  out.q_cols = f.householderQ() * Matrix::Identity(rows, rows).middleCols(first, count);
  const Index k = std::min(rows, tall.cols());
  out.r_diag_abs = f.matrixQR().diagonal().head(k).cwiseAbs();
  return out;
}

namespace {
Matrix reverse_rows(const Matrix& m) { return m.colwise().reverse(); }
Matrix reverse_cols(const Matrix& m) { return m.rowwise().reverse(); }
}  // namespace

RQ rq(const Matrix& m) {
  // (J M)^H = Qt Rt  =>  M = (J Rt^H J)(J Qt^H)
  const QR f = qr(reverse_rows(m).adjoint());
  Matrix r = reverse_cols(reverse_rows(f.r.adjoint()));
  Matrix q = reverse_rows(f.q.adjoint());
  return {std::move(r), std::move(q)};
}

QL ql(const Matrix& m) {
  // M J = Qt Rt  =>  M = (Qt J)(J Rt J)
  const QR f = qr(reverse_cols(m));
  Matrix q = reverse_cols(f.q);
  Matrix l = reverse_cols(reverse_rows(f.r));
  return {std::move(q), std::move(l)};
}

Matrix haar_unitary(Index n, RandomStream& rng) {
  QR f = qr(complex_gaussian(n, n, rng));
  for (Index j = 0; j < n; ++j) {
    const Complex d = f.r(j, j);
    if (std::abs(d) > 0.0) f.q.col(j) *= d / std::abs(d);
  }
  return f.q;
}

}  // namespace defeig::linalg
