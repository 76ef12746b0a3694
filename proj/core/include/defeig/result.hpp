#pragma once

#include <string>
#include <vector>

#include "defeig/types.hpp"

namespace defeig {

/// X^H A X ~ diag(lambda_a), X^H B X ~ diag(lambda_b), X with unit columns.
struct DiagonalizationResult {
  Matrix x;
  RealVector lambda_a;
  RealVector lambda_b;
  double residual_a = 0.0;
  double residual_b = 0.0;
  int recursion_depth = 0;
  int total_halley_iters = 0;
  int splits = 0;
  std::vector<std::string> warnings;

  /// lambda_a(i) / lambda_b(i) in output order; +-inf when |lambda_b(i)| <= 1e-14.
  std::vector<double> eigenvalues() const;
  std::vector<double> sorted_eigenvalues() const;
};

}  // namespace defeig
