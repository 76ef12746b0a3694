#include "defeig/pseudospectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"

namespace defeig {
namespace {

// Exhaustive envelope scans are capped; beyond this the neighbour rule alone
// decides (it is exact, see check_shattered).
constexpr std::uint64_t kMaxEnvelopePoints = 4096;
constexpr int kEdgeBisections = 60;
constexpr int kArcSamples = 9;

}  // namespace

double shifted_sigma_min(const HermitianPencil& p, double z) {
  return linalg::sigma_min(p.a() - z * p.b());
}

bool sym_pseudo_member(const HermitianPencil& p, double z, double eps, double gamma_lb) {
  require(eps > 0.0, ErrorKind::kInvalidInput, "eps must be positive");
  require(eps < gamma_lb, ErrorKind::kPrecondition,
          "symmetric pseudospectrum characterization requires eps < gamma");
  return shifted_sigma_min(p, z) <= eps * std::sqrt(1.0 + z * z);
}

BauerFikeBounds bauer_fike(const HermitianPencil& p, std::span<const double> eigs, double eps,
                           double gamma_lb) {
  const double sigma_n_b = linalg::sigma_min(p.b());
  require(eps > 0.0, ErrorKind::kInvalidInput, "eps must be positive");
  require(eps < sigma_n_b, ErrorKind::kPrecondition, "Bauer-Fike bounds require eps < sigma_n(B)");
  require(eps < gamma_lb, ErrorKind::kPrecondition, "Bauer-Fike bounds require eps < gamma");

  BauerFikeBounds out;
  out.epsilon = eps;
  const double growth = (p.norm_a() + eps) / (sigma_n_b - eps);
  out.outer_radius = eps / gamma_lb * (1.0 + growth * growth);

  const bool a_is_zero = p.a().isZero(0.0);
  out.inner_radii.reserve(eigs.size());
  for (double lambda : eigs) {
    double r = 1.0 / p.norm_b();
    if (!a_is_zero) r = std::max(r, std::abs(lambda) / p.norm_a());
    out.inner_radii.push_back(r);
  }
  return out;
}

ShatteringReport check_shattered(const HermitianPencil& p, const ShatteringGrid& grid, double eps,
                                 double gamma_lb, std::span<const double> oracle_eigs) {
  require(grid.count > 0, ErrorKind::kInvalidInput, "shattering grid is empty");
  require(eps < gamma_lb, ErrorKind::kPrecondition, "shattering check requires eps < gamma");

  ShatteringReport report;
  bool distinct = true;
  std::set<std::int64_t> seen;
  for (double lambda : oracle_eigs) {
    const auto j = grid.interval_of(lambda);
    const std::int64_t idx = j ? static_cast<std::int64_t>(*j) : -1;
    report.eigenvalue_interval_index.push_back(idx);
    if (idx < 0 || !seen.insert(idx).second) distinct = false;
  }

  // Every component of the symmetric pseudospectrum is an interval that
  // contains an eigenvalue, so a grid point inside it forces the grid point
  // adjacent to that eigenvalue (on the same side) inside as well: checking the
  // two neighbours of each eigenvalue is exact. When the Bauer-Fike outer
  // envelope applies and is small, every point in it is checked too.
  std::set<std::uint64_t> to_check;
  for (double lambda : oracle_eigs) {
    const auto below = grid.last_below(lambda);
    if (below) to_check.insert(*below);
    const std::uint64_t above = below ? *below + 1 : 0;
    if (above < grid.count) to_check.insert(above);
  }
  if (!oracle_eigs.empty() && eps < linalg::sigma_min(p.b())) {
    const BauerFikeBounds bf = bauer_fike(p, oracle_eigs, eps, gamma_lb);
    const auto [mn, mx] = std::minmax_element(oracle_eigs.begin(), oracle_eigs.end());
    const double lo = *mn - bf.outer_radius;
    const double hi = *mx + bf.outer_radius;
    const auto first = grid.last_below(lo);
    const std::uint64_t start = first ? *first + 1 : 0;
    const auto last = grid.last_below(hi);
    if (last && *last >= start && *last - start + 1 <= kMaxEnvelopePoints) {
      for (std::uint64_t j = start; j <= *last; ++j) to_check.insert(j);
    }
  }

  report.min_grid_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t j : to_check) {
    const double z = grid.point(j);
    ++report.points_checked;
    for (double lambda : oracle_eigs)
      report.min_grid_margin = std::min(report.min_grid_margin, std::abs(lambda - z));
    if (sym_pseudo_member(p, z, eps, gamma_lb)) report.violating_grid_indices.push_back(j);
  }
  if (to_check.empty()) report.min_grid_margin = 0.0;

  report.shattered = distinct && report.violating_grid_indices.empty();
  return report;
}

FittedGrid fit_grid_offset(const HermitianPencil& p, std::span<const double> oracle_eigs,
                           double omega, double eps, double gamma_lb, double left, double right) {
  require(omega > 0.0 && right >= left, ErrorKind::kInvalidInput,
          "fit_grid_offset needs omega > 0 and right >= left");
  require(!oracle_eigs.empty(), ErrorKind::kInvalidInput, "fit_grid_offset needs eigenvalues");

  std::vector<double> res;
  for (double lambda : oracle_eigs) {
    double r = std::fmod(lambda - left, omega);
    if (r < 0.0) r += omega;
    res.push_back(r);
  }
  std::sort(res.begin(), res.end());
  std::vector<double> phases;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const double a = res[i];
    const double b = i + 1 < res.size() ? res[i + 1] : res.front() + omega;
    if (b > a) phases.push_back(std::fmod(0.5 * (a + b), omega));
  }
  if (phases.empty()) phases.push_back(std::fmod(res.front() + 0.5 * omega, omega));

  std::optional<FittedGrid> best;
  auto consider = [&](double phase) {
    ShatteringGrid g;
    g.z0 = left - omega + phase;
    g.omega = omega;
    g.count = static_cast<std::uint64_t>(std::ceil((right - g.z0) / omega)) + 1;
    g.epsilon = eps;
    ShatteringReport rep = check_shattered(p, g, eps, gamma_lb, oracle_eigs);
    const bool better =
        !best || (rep.shattered && !best->report.shattered) ||
        (rep.shattered == best->report.shattered && rep.min_grid_margin > best->report.min_grid_margin);
    if (better) best = FittedGrid{g, std::move(rep)};
  };
  for (double phase : phases) consider(phase);
  if (best->report.shattered) return *best;

  // Residue-gap midpoints can all miss a narrow feasible set. Locate each
  // eigenvalue's pseudospectral component by bisection and try the midpoints
  // arcs no component covers (sampled, since the arc midpoint may still leave
  // two eigenvalues in one interval).
  auto member = [&](double z) { return sym_pseudo_member(p, z, eps, gamma_lb); };
  auto edge = [&](double inside, double outside) {
    for (int it = 0; it < kEdgeBisections; ++it) {
      const double mid = 0.5 * (inside + outside);
      (member(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  std::vector<std::pair<double, double>> arcs;  // blocked residues [a, b], b - a < omega
  std::vector<double> eigs(oracle_eigs.begin(), oracle_eigs.end());
  std::sort(eigs.begin(), eigs.end());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const double lambda = eigs[i];
    const double lo_lim = i > 0 ? std::max(lambda - omega, 0.5 * (eigs[i - 1] + lambda)) : lambda - omega;
    const double hi_lim =
        i + 1 < eigs.size() ? std::min(lambda + omega, 0.5 * (lambda + eigs[i + 1])) : lambda + omega;
    const double lo = member(lo_lim) ? lo_lim : edge(lambda, lo_lim);
    const double hi = member(hi_lim) ? hi_lim : edge(lambda, hi_lim);
    if (hi - lo >= omega) return *best;
    double ra = std::fmod(lo - left, omega);
    if (ra < 0.0) ra += omega;
    const double rb = ra + (hi - lo);
    if (rb <= omega) {
      arcs.emplace_back(ra, rb);
    } else {
      arcs.emplace_back(ra, omega);
      arcs.emplace_back(0.0, rb - omega);
    }
  }
  std::sort(arcs.begin(), arcs.end());
  double covered = 0.0;
  std::vector<std::pair<double, double>> free_arcs;
  for (const auto& [a, b] : arcs) {
    if (a > covered) free_arcs.emplace_back(covered, a);
    covered = std::max(covered, b);
  }
  if (covered < omega) free_arcs.emplace_back(covered, omega);
  for (const auto& [a, b] : free_arcs) {
    for (int i = 0; i < kArcSamples && !best->report.shattered; ++i)
      consider(a + (b - a) * (i + 0.5) / kArcSamples);
  }
  return *best;
}

}  // namespace defeig
