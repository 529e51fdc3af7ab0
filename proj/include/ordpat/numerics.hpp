#pragma once

namespace ordpat {

inline constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x);

/// Inverse of the standard normal CDF for p in (0, 1): Acklam's rational
/// approximation followed by one Halley step against erfc, which brings the
/// relative error to about 1e-15.
double normal_quantile(double p);

}  // namespace ordpat
