#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defeig/grid.hpp"
#include "defeig/pencil.hpp"
#include "defeig/rng.hpp"

namespace defeig {

/// A bounded density rho on the real line for diagonal perturbations, with
/// its sup norm and a tail bound P[|X| > m_rho] <= tail_theta.
struct DiagonalDensitySpec {
  std::function<double(RandomStream&)> sampler;
  double sup_density = 0.0;
  double m_rho = 0.0;
  double tail_theta = 0.0;

  /// N(0, 1/n) with m_rho = sqrt(4 log n / n).
  static DiagonalDensitySpec scaled_normal(Index n);
  static DiagonalDensitySpec standard_normal(double m_rho = 5.0);
  static DiagonalDensitySpec uniform(double lo, double hi);
};

enum class PerturbationKind { kGue, kDiagonal };

const char* to_string(PerturbationKind kind);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kGue;
  std::optional<DiagonalDensitySpec> density;  ///< defaults to scaled_normal(n)
  double mu = 0.0;
  Seed seed = 0;
};

struct PerturbationRecord {
  PerturbationKind kind = PerturbationKind::kGue;
  double mu = 0.0;
  Seed seed = 0;
  double norm_v1 = 0.0;  ///< ||V1||_2 of the draw added to A
  double norm_v2 = 0.0;  ///< ||V2||_2 of the draw added to B
};

struct PerturbedPencil {
  HermitianPencil pencil;
  PerturbationRecord record;
};

/// (G + G^H) / sqrt(2) with G having i.i.d. N_C(0, 1/n) entries.
Matrix sample_gue(Index n, Seed seed);
Matrix sample_gue(Index n, RandomStream& rng);

/// Real diagonal matrix with i.i.d. entries drawn from `spec.sampler`.
Matrix sample_diagonal(Index n, const DiagonalDensitySpec& spec, Seed seed);
Matrix sample_diagonal(Index n, const DiagonalDensitySpec& spec, RandomStream& rng);

/// (A + mu V1, B + mu V2) with V1, V2 drawn from independent substreams.
PerturbedPencil perturb(const HermitianPencil& p, const PerturbationSpec& spec);

struct GridBuild {
  ShatteringGrid grid;
  bool within_theory_bound = true;  ///< mu < gamma / (12 sqrt 2)
  std::vector<std::string> warnings;
};

/// Grid and epsilon for which GUE-perturbed pencils shatter with high
/// probability: omega = mu^3 gamma^2 / n^5, z0 uniform in
/// (-3n^2/(2mu) - omega, -3n^2/(2mu)), count = ceil(3n^2/(mu omega)) + 2,
/// epsilon = mu^6 gamma^2 / (6 n^11).
GridBuild build_shattering_grid(Index n, double mu, double gamma_lb, Seed seed);

/// User-sized grid covering [left, right] with spacing omega; z0 is drawn
/// uniformly from (left - omega, left].
ShatteringGrid practical_grid(double left, double right, double omega, double epsilon, Seed seed);

struct GeneratedPencil {
  HermitianPencil pencil;
  Matrix x;                      ///< generator: (A, B) = (X^H Lambda X, X^H X)
  std::vector<double> eig_spec;  ///< Lambda
  double kappa_x = 1.0;
};

/// (X^H Lambda X, X^H X) with X a Haar unitary modified by a rank-one term
/// so that ||X||_2 = 1 and kappa_2(X) = cond_target.
GeneratedPencil generate_test_pencil(Index n, std::span<const double> eig_spec, double cond_target,
                                     Seed seed);
/// Same construction around a caller-supplied X.
GeneratedPencil pencil_from_factors(const Matrix& x, std::span<const double> eig_spec);

/// Eigenvalue list of the repeated-eigenvalue preset: n uniform draws in
/// [-1, 1] with two entries replaced by +1.
std::vector<double> repeated_eigenvalue_preset(Index n, Seed seed);

}  // namespace defeig
