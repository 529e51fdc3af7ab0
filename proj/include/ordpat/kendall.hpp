#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ordpat/estimate.hpp"
#include "ordpat/samples.hpp"

namespace ordpat {

/// Above this many windows the pair loop may be replaced by a random subset
/// of pairs (when `KendallOptions::subsample_pairs` is set).
inline constexpr std::size_t kExactWindowLimit = 20000;

struct KendallOptions {
  std::optional<std::size_t> subsample_pairs;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Sample analogues of Pr(X <= X~), Pr(Y <= Y~) and Pr(X <= X~, Y <= Y~),
/// with <= taken componentwise.
struct DominanceProbabilities {
  double p_x = 0.0;
  double p_y = 0.0;
  double p_xy = 0.0;
};

/// Empirical first-order Hoeffding projections, one value per window.
struct HoeffdingTerms {
  std::vector<double> f1;
  std::vector<double> g1;
  std::vector<double> h1;
};

/// 3x3 long-run covariance of (p_x, p_y, p_xy), row-major.
struct LongRunCovariance {
  std::array<double, 9> values{};
  std::size_t bandwidth = 0;
  bool clamped = false;

  double operator()(std::size_t i, std::size_t j) const { return values[i * 3 + j]; }
};

DominanceProbabilities dominance_counts(const VectorSamples& x_windows,
                                        const VectorSamples& y_windows,
                                        const KendallOptions& options = {});

double psi(double x, double y, double z);

/// (d/dx, d/dy, d/dz) of psi.
std::array<double, 3> grad_psi(double x, double y, double z);

HoeffdingTerms hoeffding_terms(const VectorSamples& x_windows, const VectorSamples& y_windows);

/// Bartlett-weighted autocovariance sums up to `bandwidth` lags (default
/// floor(m^(1/3))), scaled by 4.
LongRunCovariance longrun_covariance(const HoeffdingTerms& terms,
                                     std::optional<std::size_t> bandwidth = std::nullopt);

DependenceEstimate kendall_tau(std::span<const double> x, std::span<const double> y, int h,
                               const KendallOptions& options = {});

DependenceEstimate kendall_tau_with_ci(std::span<const double> x, std::span<const double> y,
                                       int h, double confidence = 0.95,
                                       std::optional<std::size_t> bandwidth = std::nullopt);

}  // namespace ordpat
