#include "defeig/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"

namespace defeig {

DiagonalDensitySpec DiagonalDensitySpec::scaled_normal(Index n) {
  const double nn = static_cast<double>(n);
  const double sd = 1.0 / std::sqrt(nn);
  DiagonalDensitySpec spec;
  spec.sampler = [sd](RandomStream& rng) { return sd * rng.normal(); };
  spec.sup_density = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  spec.m_rho = std::sqrt(4.0 * std::log(std::max(nn, 2.0)) / nn);
  spec.tail_theta = std::erfc(spec.m_rho / (sd * std::sqrt(2.0)));
  return spec;
}

DiagonalDensitySpec DiagonalDensitySpec::standard_normal(double m_rho) {
  DiagonalDensitySpec spec;
  spec.sampler = [](RandomStream& rng) { return rng.normal(); };
  spec.sup_density = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  spec.m_rho = m_rho;
  spec.tail_theta = std::erfc(m_rho / std::sqrt(2.0));
  return spec;
}

DiagonalDensitySpec DiagonalDensitySpec::uniform(double lo, double hi) {
  require(hi > lo, ErrorKind::kInvalidInput, "uniform density needs hi > lo");
  DiagonalDensitySpec spec;
  spec.sampler = [lo, hi](RandomStream& rng) { return rng.uniform(lo, hi); };
  spec.sup_density = 1.0 / (hi - lo);
  spec.m_rho = std::max(std::abs(lo), std::abs(hi));
  spec.tail_theta = 0.0;
  return spec;
}

const char* to_string(PerturbationKind kind) {
  return kind == PerturbationKind::kGue ? "gue" : "diag";
}

Matrix sample_gue(Index n, RandomStream& rng) {
  require(n >= 1, ErrorKind::kInvalidInput, "GUE dimension must be positive");
  const Matrix g = complex_gaussian(n, n, rng, 1.0 / static_cast<double>(n));
  Matrix z = (g + g.adjoint()) / std::sqrt(2.0);
  // Exactly Hermitian: mirror the upper triangle and zero the diagonal imaginary parts.
  for (Index j = 0; j < n; ++j) {
    z(j, j) = z(j, j).real();
    for (Index i = j + 1; i < n; ++i) z(i, j) = std::conj(z(j, i));
  }
  return z;
}

Matrix sample_gue(Index n, Seed seed) {
  RandomStream rng(seed);
  return sample_gue(n, rng);
}

Matrix sample_diagonal(Index n, const DiagonalDensitySpec& spec, RandomStream& rng) {
  require(n >= 1, ErrorKind::kInvalidInput, "diagonal dimension must be positive");
  require(static_cast<bool>(spec.sampler), ErrorKind::kInvalidInput, "density has no sampler");
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = spec.sampler(rng);
  return d;
}

Matrix sample_diagonal(Index n, const DiagonalDensitySpec& spec, Seed seed) {
  RandomStream rng(seed);
  return sample_diagonal(n, spec, rng);
}

PerturbedPencil perturb(const HermitianPencil& p, const PerturbationSpec& spec) {
  require(spec.mu >= 0.0, ErrorKind::kInvalidInput, "perturbation size must be nonnegative");
  const Index n = p.n();
  const RandomStream root(spec.seed);
  RandomStream s1 = root.substream(streams::kPerturbA);
  RandomStream s2 = root.substream(streams::kPerturbB);

  Matrix v1;
  Matrix v2;
  if (spec.kind == PerturbationKind::kGue) {
    v1 = sample_gue(n, s1);
    v2 = sample_gue(n, s2);
  } else {
    const DiagonalDensitySpec density = spec.density ? *spec.density : DiagonalDensitySpec::scaled_normal(n);
    v1 = sample_diagonal(n, density, s1);
    v2 = sample_diagonal(n, density, s2);
  }

  PerturbationRecord record;
  record.kind = spec.kind;
  record.mu = spec.mu;
  record.seed = spec.seed;
  record.norm_v1 = linalg::hermitian_norm(v1);
  record.norm_v2 = linalg::hermitian_norm(v2);
  if (spec.mu == 0.0) return {p, record};
  return {HermitianPencil(p.a() + spec.mu * v1, p.b() + spec.mu * v2), record};
}

GridBuild build_shattering_grid(Index n, double mu, double gamma_lb, Seed seed) {
  require(mu > 0.0 && gamma_lb > 0.0, ErrorKind::kInvalidInput,
          "grid construction needs positive mu and gamma");
  require(n >= 1, ErrorKind::kInvalidInput, "grid construction needs n >= 1");
  const double nn = static_cast<double>(n);

  GridBuild out;
  if (!(mu < gamma_lb / (12.0 * std::sqrt(2.0)))) {
    out.within_theory_bound = false;
    out.warnings.emplace_back("mu >= gamma/(12 sqrt 2): shattering guarantee does not apply");
  }

  const double omega = std::pow(mu, 3) * gamma_lb * gamma_lb / std::pow(nn, 5);
  const double edge = 3.0 * nn * nn / (2.0 * mu);
  const double span_points = std::ceil(3.0 * nn * nn / (mu * omega)) + 2.0;
  if (!(span_points < 0x1.0p62)) {
    std::ostringstream os;
    os << "shattering grid has " << span_points << " points, beyond 64-bit indexing";
    fail(ErrorKind::kInvalidInput, os.str());
  }

  RandomStream rng = RandomStream(seed).substream(streams::kGridOffset);
  double z0 = -edge - omega * rng.uniform();
  if (!(z0 < -edge)) z0 = std::nextafter(-edge, -std::numeric_limits<double>::infinity());

  out.grid.z0 = z0;
  out.grid.omega = omega;
  out.grid.count = static_cast<std::uint64_t>(span_points);
  out.grid.epsilon = std::pow(mu, 6) * gamma_lb * gamma_lb / (6.0 * std::pow(nn, 11));
  return out;
}

ShatteringGrid practical_grid(double left, double right, double omega, double epsilon, Seed seed) {
  require(omega > 0.0 && right >= left, ErrorKind::kInvalidInput,
          "practical grid needs omega > 0 and right >= left");
  RandomStream rng = RandomStream(seed).substream(streams::kGridOffset);
  ShatteringGrid g;
  g.z0 = left - omega * rng.uniform();
  const double span_points = std::ceil((right - g.z0) / omega) + 1.0;
  require(span_points < 0x1.0p62, ErrorKind::kInvalidInput, "practical grid too fine");
  g.omega = omega;
  g.count = static_cast<std::uint64_t>(span_points);
  g.epsilon = epsilon;
  return g;
}

GeneratedPencil pencil_from_factors(const Matrix& x, std::span<const double> eig_spec) {
  require(x.rows() == x.cols() && static_cast<std::size_t>(x.rows()) == eig_spec.size(),
          ErrorKind::kInvalidInput, "eigenvalue list length must match the generator dimension");
  const Index n = x.rows();
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = eig_spec[static_cast<std::size_t>(i)];
  const Matrix a = linalg::hermitian_part(x.adjoint() * lambda.asDiagonal() * x);
  const Matrix b = linalg::hermitian_part(x.adjoint() * x);
  const RealVector s = linalg::singular_values(x);
  return {HermitianPencil(a, b), x, std::vector<double>(eig_spec.begin(), eig_spec.end()),
          s(0) / s(n - 1)};
}

GeneratedPencil generate_test_pencil(Index n, std::span<const double> eig_spec, double cond_target,
                                     Seed seed) {
  require(n >= 1 && static_cast<std::size_t>(n) == eig_spec.size(), ErrorKind::kInvalidInput,
          "eigenvalue list length must equal n");
  require(cond_target >= 1.0, ErrorKind::kInvalidInput, "cond_target must be >= 1");
  RandomStream rng = RandomStream(seed).substream(streams::kGenerator);

  const Matrix q = linalg::haar_unitary(n, rng);

  // Rank-one pull-down: X = Q - (1 - 1/kappa) Q v v^H with v a random unit
  // vector, so X has singular values {1, ..., 1, 1/kappa}.
  Vector v = complex_gaussian(n, 1, rng).col(0);
  v.normalize();
  const Matrix x = q - (1.0 - 1.0 / cond_target) * (q * v) * v.adjoint();
  return pencil_from_factors(x, eig_spec);
}

std::vector<double> repeated_eigenvalue_preset(Index n, Seed seed) {
  require(n >= 2, ErrorKind::kInvalidInput, "repeated-eigenvalue preset needs n >= 2");
  RandomStream rng = RandomStream(seed).substream(streams::kGenerator + 100);
  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (double& e : eigs) e = rng.uniform(-1.0, 1.0);
  eigs[0] = 1.0;
  eigs[1] = 1.0;
  return eigs;
}

}  // namespace defeig
