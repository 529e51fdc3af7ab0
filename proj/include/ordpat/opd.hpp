#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ordpat/estimate.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/samples.hpp"

namespace ordpat {

/// Denominators 1 - sum q_x q_y below this are treated as degenerate.
inline constexpr double kDenominatorEpsilon = 1e-12;

/// Contingency counts of (pattern of X_i, pattern of Y_i); row-major,
/// rows indexed by the X pattern.
struct JointPatternTable {
  int order = 1;
  std::size_t cells = 0;  // (h+1)!
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t at(std::size_t px, std::size_t py) const { return counts[px * cells + py]; }
  PatternDistribution x_marginal() const;
  PatternDistribution y_marginal() const;
  std::uint64_t matches() const;
};

/// (q_match - <q_x, q_y>) / (1 - <q_x, q_y>).
double opd_plugin(double q_match, std::span<const double> q_x, std::span<const double> q_y);

/// Ordinal pattern dependence of two series over sliding windows. The
/// windows of y start `shift` steps later; both pattern sequences are
/// truncated to their common length. No variance is reported.
DependenceEstimate opd_from_series(std::span<const double> x, std::span<const double> y, int h,
                                   std::size_t shift = 0);

/// OPD(x, y)^+ - OPD(x, -y)^+.
double signed_opd(std::span<const double> x, std::span<const double> y, int h);

JointPatternTable joint_pattern_table(std::span<const PatternCode> x_codes,
                                      std::span<const PatternCode> y_codes);
JointPatternTable joint_pattern_table(const VectorSamples& x_vectors,
                                      const VectorSamples& y_vectors);

/// Square covariance matrix (row-major) of the indicator vector
/// (1{match}, 1{Pi(X)=pi}_pi, 1{Pi(Y)=pi}_pi), plug-in from the table.
struct IndicatorCovariance {
  std::size_t dim = 0;  // 2 (h+1)! + 1
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
};

IndicatorCovariance opd_iid_covariance(const JointPatternTable& table);

/// Gradient of f(u, v, w) = (u - v.w) / (1 - v.w), ordered (u, v..., w...).
std::vector<double> grad_f(double u, std::span<const double> v, std::span<const double> w);

/// OPD from paired i.i.d. (h+1)-vectors with a delta-method normal interval.
DependenceEstimate opd_iid_estimate(const VectorSamples& x_vectors, const VectorSamples& y_vectors,
                                    double confidence = 0.95);

}  // namespace ordpat
