#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "defeig/grid.hpp"
#include "defeig/pencil.hpp"

namespace defeig {

struct BauerFikeBounds {
  double outer_radius = 0.0;          ///< r_eps
  std::vector<double> inner_radii;    ///< r_i, one per eigenvalue
  double epsilon = 0.0;
};

struct ShatteringReport {
  bool shattered = false;
  /// Interval index j with eigenvalue in (g_j, g_{j+1}); -1 when outside the grid.
  std::vector<std::int64_t> eigenvalue_interval_index;
  double min_grid_margin = 0.0;
  std::vector<std::uint64_t> violating_grid_indices;
  std::uint64_t points_checked = 0;
};

/// sigma_min(A - z B).
double shifted_sigma_min(const HermitianPencil& p, double z);

/// Membership of real z in the symmetric eps-pseudospectrum through the
/// characterization sigma_min(A - zB) <= eps * sqrt(1 + z^2), valid for
/// eps below the Crawford number.
bool sym_pseudo_member(const HermitianPencil& p, double z, double eps, double gamma_lb);

/// Inner and outer interval radii bracketing the symmetric pseudospectrum
/// around the eigenvalues `eigs`.
BauerFikeBounds bauer_fike(const HermitianPencil& p, std::span<const double> eigs, double eps,
                           double gamma_lb);

/// Checks both shattering conditions against oracle eigenvalues: every
/// eigenvalue alone in its grid interval, and no grid point in the
/// pseudospectrum.
ShatteringReport check_shattered(const HermitianPencil& p, const ShatteringGrid& grid, double eps,
                                 double gamma_lb, std::span<const double> oracle_eigs);

struct FittedGrid {
  ShatteringGrid grid;
  ShatteringReport report;
};

/// Grid of spacing omega covering [left, right] with the offset picked from
/// the midpoints between consecutive eigenvalue residues modulo omega: the
/// shattered candidate with the largest grid margin wins. Without one, the
/// phase arcs free of every pseudospectral component are sampled;
/// else the largest margin overall.
FittedGrid fit_grid_offset(const HermitianPencil& p, std::span<const double> oracle_eigs,
                           double omega, double eps, double gamma_lb, double left, double right);

}  // namespace defeig
