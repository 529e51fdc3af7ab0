#pragma once

#include <span>

#include <Eigen/Dense>

#include "ordpat/estimate.hpp"

namespace ordpat {

/// Relative eigenvalue floor below which a window covariance is singular.
inline constexpr double kPositiveDefiniteEpsilon = 1e-10;

struct WindowCovariances {
  Eigen::MatrixXd sigma_x;
  Eigen::MatrixXd sigma_y;
  Eigen::MatrixXd sigma_xy;  // (a, b) = Cov(X_a, Y_b)
  std::size_t windows = 0;
};

/// Sample covariances of the overlapping (h+1)-windows, denominator m - 1.
WindowCovariances window_covariances(std::span<const double> x, std::span<const double> y, int h);

/// Principal square root of a symmetric positive semidefinite matrix.
/// Eigenvalues within rounding of zero are clamped to zero.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& a);

/// tr(S_XY) / tr((S_X S_Y)^(1/2)), the denominator evaluated through the
/// similar symmetric matrix S_X^(1/2) S_Y S_X^(1/2).
double pearson_mv(const WindowCovariances& cov);
DependenceEstimate pearson_mv(std::span<const double> x, std::span<const double> y, int h);

}  // namespace ordpat
