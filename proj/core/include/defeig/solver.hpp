#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "defeig/grid.hpp"
#include "defeig/pencil.hpp"
#include "defeig/randomize.hpp"
#include "defeig/result.hpp"
#include "defeig/rng.hpp"

namespace defeig {

enum class SolverMode { kTheory, kPractical };

const char* to_string(SolverMode mode);

struct SplitEvent;

struct SolverParams {
  Index n_top = 1;
  double epsilon = 0.0;
  double gamma_lb = 0.0;
  double c = 1.0;
  double r = 1.0;
  double eta = 0.0;
  double theta_fail = 0.5;
  SolverMode mode = SolverMode::kPractical;

  // practical-mode knobs
  /// Range ratios of an oblique projector can fall well below 1, null ratios
  /// sit at rounding level once converged; 1e-6 separates the two clusters.
  double rank_threshold = 1e-6;
  double delta_floor = 1e-15;
  /// Bisect between adjacent grid points when the rank jumps over the
  /// acceptance window there.
  bool refine_on_straddle = true;
  /// Extra l = 1 Halley steps when the rank ratios sit near the threshold or
  /// the accepted bases still couple A or B above eta / 2.
  bool polish_ambiguous = true;

  int max_halley_iters = 40;
  /// Take U_k from the rank probe instead of a fresh factorization.
  bool reuse_probe_factorization = false;
  /// Maximum concurrent recursion branches (1 = sequential).
  int threads = 1;
  /// Called once per accepted split; may be invoked from worker threads.
  std::function<void(const SplitEvent&)> observer;
};

/// Accepted split: U_k spans the right deflating subspace (eigenvalues above
/// grid_value), U_{m-k} the left one.
struct SplitOutcome {
  std::uint64_t grid_index = 0;
  double grid_value = 0.0;
  bool refined = false;  ///< grid_value lies strictly between grid_index and grid_index + 1
  Index k = 0;
  Matrix u_right;
  Matrix u_left_of;
  int halley_iters = 0;
  int polish_iters = 0;
  double l_final = 0.0;
  RealVector ratios;
  double coupling_a = 0.0;  ///< ||U_k^H A U_{m-k}||_2
  double coupling_b = 0.0;
};

struct SplitEvent {
  std::uint64_t path = 1;  ///< 1 followed by one bit per level (1 = right child)
  int depth = 0;
  const HermitianPencil* parent = nullptr;
  const HermitianPencil* right = nullptr;
  const HermitianPencil* left = nullptr;
  const SplitOutcome* outcome = nullptr;
  int probes = 0;
  double epsilon = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double l0 = 0.0;
  double l_target = 0.0;
};

struct DeltaValue {
  double value = 0.0;  ///< after the practical floor
  double raw = 0.0;    ///< min of the three closed-form branches
  bool clamped = false;
};

/// min{4t/(4t + 3 z n^2 (n-1)), sqrt(t/(3(n-1))) e^2 g^2/(800 n c^2 (g+c)^2),
///     sqrt(t/(3(n-1))) eta^2/(36 n m^2 c^2)} with t = theta_fail, z = zeta, n = n_top.
DeltaValue compute_delta(const SolverParams& params, Index m, int zeta);

/// 4 eps gamma / (5 (gamma + c)).
double child_epsilon(double epsilon, double gamma_lb, double c);

/// floor(log2 |g| + 1) for a grid of `points` points.
int zeta_for(std::uint64_t points);

/// Rank threshold applied to |R2(i,i) / R1(i,i)|.
double rank_threshold(const SolverParams& params, double delta, int zeta);

struct ProbeResult {
  Index k = 0;
  int halley_iters = 0;
  int polish_iters = 0;
  double l_final = 0.0;
  RealVector ratios;
};

/// Rank of the right spectral projector at g_val (no deflating bases).
ProbeResult probe_gridpoint(const HermitianPencil& p, double g_val, const SolverParams& params,
                            double delta, int zeta, Seed seed);

/// Full split at g_val: rank plus U_k and U_{m-k}.
SplitOutcome split_at_gridpoint(const HermitianPencil& p, double g_val, const SolverParams& params,
                                double delta, int zeta, Seed seed);

struct FoundSplit {
  SplitOutcome outcome;
  int probes = 0;
  GridRange right;  ///< grid points above the split value
  GridRange left;   ///< grid points below the split value
};

/// Binary search over the grid window for a point with floor(m/2) <= k <= ceil(m/2).
FoundSplit find_split(const HermitianPencil& p, const GridRange& range, const SolverParams& params,
                      Seed seed);
FoundSplit find_split(const HermitianPencil& p, const ShatteringGrid& grid,
                      const SolverParams& params, Seed seed);

/// Divide-and-conquer diagonalization; residuals are measured against p.
DiagonalizationResult eig_dwh(const HermitianPencil& p, const ShatteringGrid& grid,
                              const SolverParams& params, Seed seed);

/// Optional practical-mode overrides for the two-step pipeline.
struct PracticalOverrides {
  std::optional<double> epsilon;
  std::optional<double> omega;
  std::optional<double> r;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<double> c;
  std::optional<double> rank_threshold;
};

struct PipelineOptions {
  SolverMode mode = SolverMode::kPractical;
  PracticalOverrides practical;
  int grid_log2 = 20;  ///< practical default: about 2^grid_log2 grid points across (-r, r)
  int threads = 1;
  bool reuse_probe_factorization = false;
  std::function<void(const SplitEvent&)> observer;
};

struct PipelineResult {
  DiagonalizationResult result;
  PerturbationRecord perturbation;
  ShatteringGrid grid;
  SolverParams params;
  double mu = 0.0;
  std::vector<std::string> warnings;
};

/// Perturb (A, B) at size mu = xi/(12n)(1 - 1e-6), build a shattering grid and
/// run eig_dwh. Requires ||A||_2, ||B||_2 <= 1, 0 < xi < 1, xi < n gamma_lb / sqrt 2.
PipelineResult diagonalize_definite(const HermitianPencil& p, double xi, double gamma_lb,
                                    PerturbationKind kind, Seed seed,
                                    const PipelineOptions& options = {});

}  // namespace defeig
