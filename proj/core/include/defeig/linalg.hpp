#pragma once

#include "defeig/rng.hpp"
#include "defeig/types.hpp"

namespace defeig::linalg {

RealVector singular_values(const Matrix& m);
double spectral_norm(const Matrix& m);
double sigma_min(const Matrix& m);
/// Spectral norm of a Hermitian matrix via its eigenvalues.
double hermitian_norm(const Matrix& h);
double lambda_min(const Matrix& h);
double lambda_max(const Matrix& h);

/// (M + M^H) / 2.
Matrix hermitian_part(const Matrix& m);
/// ||M - M^H||_2.
double hermitian_defect(const Matrix& m);

/// Square QR factorization M = Q R with Q unitary.
struct QR {
  Matrix q;
  Matrix r;
};
QR qr(const Matrix& m);

/// Columns `first, ..., first + count - 1` of the full unitary Q from the
/// Householder QR of a tall matrix; also returns |R(i,i)| for breakdown checks.
struct TrailingQ {
  Matrix q_cols;
  RealVector r_diag_abs;
};
TrailingQ householder_q_columns(const Matrix& tall, Index first, Index count);

/// M = R * Q with R upper triangular and Q unitary.
struct RQ {
  Matrix r;
  Matrix q;
};
RQ rq(const Matrix& m);

/// M = Q * L with Q unitary and L lower triangular.
struct QL {
  Matrix q;
  Matrix l;
};
QL ql(const Matrix& m);

/// Haar unitary: Q factor of a Ginibre matrix with the phases of R's diagonal removed.
Matrix haar_unitary(Index n, RandomStream& rng);

}  // namespace defeig::linalg
