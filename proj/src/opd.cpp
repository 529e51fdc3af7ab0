#include "ordpat/opd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordpat/error.hpp"

namespace ordpat {
namespace {

double inner(std::span<const double> v, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

double checked_denominator(double vw) {
  const double den = 1.0 - vw;
  if (den < kDenominatorEpsilon) {
    throw Error(ErrorKind::DegenerateDenominator,
                "1 - sum q_x q_y = " + std::to_string(den) +
                    "; both series show a single common pattern almost surely");
  }
  return den;
}

void check_probabilities(std::span<const double> q_x, std::span<const double> q_y) {
  if (q_x.size() != q_y.size() || q_x.empty()) {
    throw Error(ErrorKind::InputMismatch, "pattern probability vectors differ in length");
  }
}

}  // namespace

PatternDistribution JointPatternTable::x_marginal() const {
  PatternDistribution d{order, std::vector<std::uint64_t>(cells, 0), total};
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) d.counts[i] += at(i, j);
  return d;
}

PatternDistribution JointPatternTable::y_marginal() const {
  PatternDistribution d{order, std::vector<std::uint64_t>(cells, 0), total};
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) d.counts[j] += at(i, j);
  return d;
}

std::uint64_t JointPatternTable::matches() const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < cells; ++i) m += at(i, i);
  return m;
}

double opd_plugin(double q_match, std::span<const double> q_x, std::span<const double> q_y) {
  check_probabilities(q_x, q_y);
  if (!(q_match >= 0.0 && q_match <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "match probability outside [0, 1]");
  }
  const double vw = inner(q_x, q_y);
  return (q_match - vw) / checked_denominator(vw);
}

DependenceEstimate opd_from_series(std::span<const double> x, std::span<const double> y, int h,
                                   std::size_t shift) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::InputMismatch, "series lengths differ (" + std::to_string(x.size()) +
                                              " vs " + std::to_string(y.size()) + ")");
  }
  const auto x_codes = pattern_sequence(x, h, 0);
  const auto y_codes = pattern_sequence(y, h, shift);
  const std::size_t m = std::min(x_codes.size(), y_codes.size());
  if (m < 2) throw Error(ErrorKind::InsufficientData, "fewer than two usable windows");

  const std::span<const PatternCode> xs(x_codes.data(), m);
  const std::span<const PatternCode> ys(y_codes.data(), m);
  const auto table = joint_pattern_table(xs, ys);
  const auto qx = table.x_marginal().relative();
  const auto qy = table.y_marginal().relative();
  const double q_match = static_cast<double>(table.matches()) / static_cast<double>(m);

  DependenceEstimate est;
  est.value = opd_plugin(q_match, qx, qy);
  est.method = "opd";
  est.h = h;
  est.n = x.size();
  est.shift = shift;
  return est;
}

double signed_opd(std::span<const double> x, std::span<const double> y, int h) {
  std::vector<double> neg_y(y.begin(), y.end());
  for (auto& v : neg_y) v = -v;
  const double pos = opd_from_series(x, y, h).value;
  const double neg = opd_from_series(x, neg_y, h).value;
  return std::max(pos, 0.0) - std::max(neg, 0.0);
}

JointPatternTable joint_pattern_table(std::span<const PatternCode> x_codes,
                                      std::span<const PatternCode> y_codes) {
  if (x_codes.size() != y_codes.size()) {
    throw Error(ErrorKind::InputMismatch, "paired pattern sequences differ in length");
  }
  if (x_codes.empty()) throw Error(ErrorKind::InsufficientData, "no paired patterns");
  const int h = x_codes.front().order;
  JointPatternTable t;
  t.order = h;
  t.cells = pattern_count(h);
  t.counts.assign(t.cells * t.cells, 0);
  for (std::size_t i = 0; i < x_codes.size(); ++i) {
    if (x_codes[i].order != h || y_codes[i].order != h) {
      throw Error(ErrorKind::OrderMismatch, "patterns of different orders");
    }
    ++t.counts[x_codes[i].code * t.cells + y_codes[i].code];
  }
  t.total = x_codes.size();
  return t;
}

JointPatternTable joint_pattern_table(const VectorSamples& x_vectors,
                                      const VectorSamples& y_vectors) {
  if (x_vectors.dim() != y_vectors.dim() || x_vectors.rows() != y_vectors.rows()) {
    throw Error(ErrorKind::InputMismatch, "paired vector samples differ in shape");
  }
  const auto xc = pattern_sequence(x_vectors);
  const auto yc = pattern_sequence(y_vectors);
  return joint_pattern_table(xc, yc);
}

IndicatorCovariance opd_iid_covariance(const JointPatternTable& table) {
  if (table.total == 0) throw Error(ErrorKind::InsufficientData, "empty pattern table");
  const std::size_t k = table.cells;
  const double n = static_cast<double>(table.total);
  const auto qx = table.x_marginal().relative();
  const auto qy = table.y_marginal().relative();
  const double q = static_cast<double>(table.matches()) / n;

  IndicatorCovariance cov;
  cov.dim = 2 * k + 1;
  cov.values.assign(cov.dim * cov.dim, 0.0);
  auto set = [&](std::size_t i, std::size_t j, double v) {
    cov.values[i * cov.dim + j] = v;
    cov.values[j * cov.dim + i] = v;
  };

  set(0, 0, q * (1.0 - q));
  for (std::size_t p = 0; p < k; ++p) {
    const double diag = static_cast<double>(table.at(p, p)) / n;
    set(0, 1 + p, diag - q * qx[p]);
    set(0, 1 + k + p, diag - q * qy[p]);
  }
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t r = p; r < k; ++r) {
      set(1 + p, 1 + r, p == r ? qx[p] * (1.0 - qx[p]) : -qx[p] * qx[r]);
      set(1 + k + p, 1 + k + r, p == r ? qy[p] * (1.0 - qy[p]) : -qy[p] * qy[r]);
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t r = 0; r < k; ++r) {
      set(1 + p, 1 + k + r, static_cast<double>(table.at(p, r)) / n - qx[p] * qy[r]);
    }
  }
  return cov;
}

std::vector<double> grad_f(double u, std::span<const double> v, std::span<const double> w) {
  check_probabilities(v, w);
  const double den = checked_denominator(inner(v, w));
  const std::size_t k = v.size();
  std::vector<double> g(2 * k + 1);
  g[0] = 1.0 / den;
  const double scale = (u - 1.0) / (den * den);
  for (std::size_t i = 0; i < k; ++i) {
    g[1 + i] = w[i] * scale;
    g[1 + k + i] = v[i] * scale;
  }
  return g;
}

DependenceEstimate opd_iid_estimate(const VectorSamples& x_vectors, const VectorSamples& y_vectors,
                                    double confidence) {
  const auto table = joint_pattern_table(x_vectors, y_vectors);
  const auto qx = table.x_marginal().relative();
  const auto qy = table.y_marginal().relative();
  const double n = static_cast<double>(table.total);
  const double q = static_cast<double>(table.matches()) / n;

  DependenceEstimate est;
  est.value = opd_plugin(q, qx, qy);
  est.method = "opd-iid";
  est.h = table.order;
  est.n = table.total;

  const auto g = grad_f(q, qx, qy);
  const auto cov = opd_iid_covariance(table);
  double sigma2 = 0.0;
  for (std::size_t i = 0; i < cov.dim; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cov.dim; ++j) row += cov(i, j) * g[j];
    sigma2 += g[i] * row;
  }
  attach_normal_ci(est, sigma2 / n, confidence);
  return est;
}

}  // namespace ordpat
