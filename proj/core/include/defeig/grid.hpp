#pragma once

#include <cstdint>
#include <optional>

namespace defeig {

/// Arithmetic progression {z0 + j * omega : 0 <= j < count} together with
/// the shattering parameter epsilon it was built for. Never materialized:
/// theoretical grids reach 1e13 points and beyond.
struct ShatteringGrid {
  double z0 = 0.0;
  double omega = 1.0;
  std::uint64_t count = 0;
  double epsilon = 0.0;

  double point(std::uint64_t j) const { return z0 + static_cast<double>(j) * omega; }
  double last() const { return point(count - 1); }

  /// Index of the interval [point(j), point(j+1)) containing z, if any.
  std::optional<std::uint64_t> interval_of(double z) const;
  /// Largest index with point(j) < z, if any.
  std::optional<std::uint64_t> last_below(double z) const;
};

/// Half-open index window [lo, hi) into a grid; recursion hands the two
/// halves of a window to the children instead of copying points.
struct GridRange {
  const ShatteringGrid* grid = nullptr;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static GridRange whole(const ShatteringGrid& g) { return {&g, 0, g.count}; }

  std::uint64_t size() const { return hi > lo ? hi - lo : 0; }
  bool empty() const { return size() == 0; }
  double point(std::uint64_t j) const { return grid->point(j); }
  /// Points strictly right of index j.
  GridRange right_of(std::uint64_t j) const { return {grid, j + 1, hi}; }
  /// Points strictly left of index j.
  GridRange left_of(std::uint64_t j) const { return {grid, lo, j}; }
};

}  // namespace defeig
