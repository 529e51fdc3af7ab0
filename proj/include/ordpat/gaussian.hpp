#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace ordpat {

/// Zero-mean Gaussian law with a validated symmetric PSD covariance.
class GaussianModel {
 public:
  explicit GaussianModel(Eigen::MatrixXd covariance);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(cov_.rows()); }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }

  /// Law of M W for W ~ this model.
  GaussianModel transformed(const Eigen::MatrixXd& map) const;

 private:
  Eigen::MatrixXd cov_;
};

/// Monte Carlo value with its standard error.
struct McValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Closed forms for Gaussian processes.
double opd1_gaussian(double increment_corr);
double bivariate_orthant(double rho);
double ar1_opd1(double a, double b);
double shifted_ar1_opd1(double rho);

inline constexpr std::size_t kOrthantMaxDimension = 16;
inline constexpr std::size_t kOrthantMinSamples = 1000;
inline constexpr std::size_t kDefaultOrthantSamples = 1000000;

/// Pr(all coordinates <= 0) by plain Monte Carlo with a Cholesky factor.
/// Samples are drawn in fixed-size blocks with per-block derived seeds, so
/// the result depends only on (model, n_samples, seed), not on `threads`.
McValue mc_orthant(const GaussianModel& model, std::size_t n_samples, std::uint64_t seed,
                   unsigned threads = 1);

/// Multivariate Kendall's tau of the two halves of a 2(h+1)-dimensional
/// model, from three orthant probabilities.
McValue kendall_gaussian(const GaussianModel& model, std::size_t n_samples, std::uint64_t seed,
                         unsigned threads = 1);

/// Rows e_{pi_j} - e_{pi_{j-1}}, j = 1..h: the window has pattern pi iff
/// D x <= 0 componentwise.
Eigen::MatrixXd increment_map(std::span<const int> permutation);

/// OPD_h of a model for (X_1..X_{h+1}, Y_1..Y_{h+1}) as a sum over all
/// patterns of joint-minus-product orthant probabilities of increments.
McValue opd_gaussian_decomposition(const GaussianModel& model, int h, std::size_t n_samples,
                                   std::uint64_t seed, unsigned threads = 1);

/// Same quantity with the monotone patterns folded into one Kendall-type
/// term: 2 [Pr(dX <= 0, dY <= 0) - Pr(dX <= 0) Pr(dY <= 0)].
McValue opd_gaussian_kendall_form(const GaussianModel& model, int h, std::size_t n_samples,
                                  std::uint64_t seed, unsigned threads = 1);

// Window laws of (X_1..X_{h+1}, Y_1..Y_{h+1}) for the simulated families.
GaussianModel biv_ar1_window_model(double a, double b, int h, bool rotation);
GaussianModel shifted_ar1_window_model(double rho, int h);
GaussianModel iid_ar1_pair_window_model(double rho, int h);
/// One coordinate column of the block-multinormal family over time.
GaussianModel block_column_window_model(double rho, int h);

}  // namespace ordpat
