#include "defeig/result.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace defeig {

std::vector<double> DiagonalizationResult::eigenvalues() const {
  std::vector<double> out(static_cast<std::size_t>(lambda_a.size()));
  for (Index i = 0; i < lambda_a.size(); ++i) {
    const double b = lambda_b(i);
    if (std::abs(b) > 1e-14) {
      out[static_cast<std::size_t>(i)] = lambda_a(i) / b;
    } else {
      out[static_cast<std::size_t>(i)] =
          std::copysign(std::numeric_limits<double>::infinity(), lambda_a(i)) *
          (std::signbit(b) ? -1.0 : 1.0);
    }
  }
  return out;
}

std::vector<double> DiagonalizationResult::sorted_eigenvalues() const {
  std::vector<double> out = eigenvalues();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace defeig
