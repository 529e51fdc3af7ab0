#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace ordpat {

/// Point estimate of a dependence measure with optional delta-method
/// uncertainty. `variance` is the estimated variance of `value` itself
/// (the asymptotic sigma^2 divided by the number of observations).
struct DependenceEstimate {
  double value = 0.0;
  std::optional<double> variance;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::string method;
  int h = 1;
  std::size_t n = 0;
  std::size_t shift = 0;
  bool variance_clamped = false;
};

/// Two-sided standard normal quantile for the given confidence level.
double normal_critical_value(double confidence);

/// Attaches variance and a normal confidence interval to `est`.
void attach_normal_ci(DependenceEstimate& est, double variance, double confidence);

}  // namespace ordpat
