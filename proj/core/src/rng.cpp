#include "defeig/rng.hpp"

#include <cmath>

namespace defeig {

double RandomStream::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(*this);
}

double RandomStream::normal() {
  // A fresh distribution per call keeps each variate a function of the
  // stream position only (no cached second Box-Muller/polar value).
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(*this);
}

Complex RandomStream::complex_normal() {
  const double s = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

Matrix complex_gaussian(Index rows, Index cols, RandomStream& rng, double variance) {
  const double scale = std::sqrt(variance);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = scale * rng.complex_normal();
  return g;
}

}  // namespace defeig
