#include "defeig/grid.hpp"

#include <cmath>

namespace defeig {

std::optional<std::uint64_t> ShatteringGrid::last_below(double z) const {
  if (count == 0 || !(z > z0)) return std::nullopt;
  const double t = std::floor((z - z0) / omega);
  std::uint64_t j = t >= static_cast<double>(count) ? count - 1 : static_cast<std::uint64_t>(t);
  // The quotient can land one index off after rounding; settle it exactly.
  while (j > 0 && !(point(j) < z)) --j;
  while (j + 1 < count && point(j + 1) < z) ++j;
  if (!(point(j) < z)) return std::nullopt;
  return j;
}

std::optional<std::uint64_t> ShatteringGrid::interval_of(double z) const {
  auto j = last_below(z);
  if (!j || *j + 1 >= count) return std::nullopt;
  if (!(z < point(*j + 1))) return std::nullopt;
  return j;
}

}  // namespace defeig
