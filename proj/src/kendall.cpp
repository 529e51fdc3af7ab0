#include "ordpat/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <unordered_set>

#include "ordpat/error.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {
namespace {

void check_windows(const VectorSamples& x, const VectorSamples& y) {
  if (x.rows() != y.rows() || x.dim() != y.dim()) {
    throw Error(ErrorKind::InputMismatch, "paired windows differ in shape");
  }
  if (x.rows() < 2) throw Error(ErrorKind::InsufficientData, "need at least two windows");
}

// a <= b componentwise.
inline bool dominated(const double* a, const double* b, std::size_t d) noexcept {
  for (std::size_t k = 0; k < d; ++k)
    if (a[k] > b[k]) return false;
  return true;
}

struct PairCounts {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t xy = 0;
};

// Both dominance directions between two windows, branch-free so the
// compiler can unroll for a fixed width D (D = 0 means runtime width).
template <std::size_t D>
inline void compare(const double* a, const double* b, std::size_t d, bool& le, bool& ge) noexcept {
  const std::size_t width = D == 0 ? d : D;
  bool l = true;
  bool g = true;
  for (std::size_t k = 0; k < width; ++k) {
    l &= a[k] <= b[k];
    g &= a[k] >= b[k];
  }
  le = l;
  ge = g;
}

// Ordered-pair dominance counts for i in [begin, end), j > i. Each unordered
// pair is visited once and both directions are evaluated.
template <std::size_t D>
PairCounts count_rows_fixed(const VectorSamples& xw, const VectorSamples& yw, std::size_t begin,
                            std::size_t end) {
  const std::size_t m = xw.rows();
  const std::size_t d = xw.dim();
  const double* xd = xw.data().data();
  const double* yd = yw.data().data();
  PairCounts c;
  for (std::size_t i = begin; i < end; ++i) {
    const double* xi = xd + i * d;
    const double* yi = yd + i * d;
    std::uint64_t cx = 0, cy = 0, cxy = 0;
    for (std::size_t j = i + 1; j < m; ++j) {
      bool lx, gx, ly, gy;
      compare<D>(xi, xd + j * d, d, lx, gx);
      compare<D>(yi, yd + j * d, d, ly, gy);
      cx += static_cast<unsigned>(lx) + static_cast<unsigned>(gx);
      cy += static_cast<unsigned>(ly) + static_cast<unsigned>(gy);
      cxy += static_cast<unsigned>(lx & ly) + static_cast<unsigned>(gx & gy);
    }
    c.x += cx;
    c.y += cy;
    c.xy += cxy;
  }
  return c;
}

PairCounts count_rows(const VectorSamples& xw, const VectorSamples& yw, std::size_t begin,
                      std::size_t end) {
  switch (xw.dim()) {
    case 2: return count_rows_fixed<2>(xw, yw, begin, end);
    case 3: return count_rows_fixed<3>(xw, yw, begin, end);
    case 4: return count_rows_fixed<4>(xw, yw, begin, end);
    default: return count_rows_fixed<0>(xw, yw, begin, end);
  }
}

DominanceProbabilities exact_dominance(const VectorSamples& xw, const VectorSamples& yw,
                                       unsigned threads) {
  const std::size_t m = xw.rows();
  threads = std::max(1u, threads);
  PairCounts total;
  if (threads == 1 || m < 256) {
    total = count_rows(xw, yw, 0, m);
  } else {
    // Rows near the top have more partners; split so each range holds
    // roughly the same number of pairs. Counts are integers, so the result
    // does not depend on the partition.
    std::vector<std::size_t> cuts{0};
    const double pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
    for (unsigned t = 1; t < threads; ++t) {
      const double target = pairs * t / threads;
      // Pairs covered by rows [0, r): r*m - r(r+1)/2.
      const double mm = static_cast<double>(m);
      const double r = (2 * mm - 1 - std::sqrt((2 * mm - 1) * (2 * mm - 1) - 8 * target)) / 2;
      cuts.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(r), cuts.back(), m));
    }
    cuts.push_back(m);
    std::vector<PairCounts> parts(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] { parts[t] = count_rows(xw, yw, cuts[t], cuts[t + 1]); });
      }
    }
    for (const auto& p : parts) {
      total.x += p.x;
      total.y += p.y;
      total.xy += p.xy;
    }
  }
  const double denom = static_cast<double>(m) * static_cast<double>(m - 1);
  return {static_cast<double>(total.x) / denom, static_cast<double>(total.y) / denom,
          static_cast<double>(total.xy) / denom};
}

DominanceProbabilities subsampled_dominance(const VectorSamples& xw, const VectorSamples& yw,
                                            std::size_t pairs, std::uint64_t seed) {
  const std::uint64_t m = xw.rows();
  const std::uint64_t universe = m * (m - 1);
  pairs = static_cast<std::size_t>(std::min<std::uint64_t>(pairs, universe));
  if (pairs == 0) throw Error(ErrorKind::InvalidInput, "subsample of zero pairs");

  // Floyd's algorithm: `pairs` distinct ordered pairs, uniformly.
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(pairs * 2);
  for (std::uint64_t j = universe - pairs; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());

  const std::size_t d = xw.dim();
  PairCounts c;
  for (auto idx : sorted) {
    const std::uint64_t i = idx / (m - 1);
    std::uint64_t j = idx % (m - 1);
    if (j >= i) ++j;
    const bool lx = dominated(xw.row(i).data(), xw.row(j).data(), d);
    const bool ly = dominated(yw.row(i).data(), yw.row(j).data(), d);
    c.x += lx;
    c.y += ly;
    c.xy += lx && ly;
  }
  const double denom = static_cast<double>(pairs);
  return {static_cast<double>(c.x) / denom, static_cast<double>(c.y) / denom,
          static_cast<double>(c.xy) / denom};
}

struct WindowCounts {
  // below[i] = #{j != i : W_j <= W_i}, above[i] = #{j != i : W_j >= W_i}
  std::vector<std::uint32_t> below_x, above_x, below_y, above_y, below_xy, above_xy;
  PairCounts total;
};

WindowCounts per_window_counts(const VectorSamples& xw, const VectorSamples& yw) {
  const std::size_t m = xw.rows();
  const std::size_t d = xw.dim();
  WindowCounts w;
  for (auto* v : {&w.below_x, &w.above_x, &w.below_y, &w.above_y, &w.below_xy, &w.above_xy})
    v->assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* xi = xw.row(i).data();
    const double* yi = yw.row(i).data();
    for (std::size_t j = i + 1; j < m; ++j) {
      const double* xj = xw.row(j).data();
      const double* yj = yw.row(j).data();
      bool lx, gx, ly, gy;
      compare<0>(xi, xj, d, lx, gx);
      compare<0>(yi, yj, d, ly, gy);
      if (lx) { ++w.above_x[i]; ++w.below_x[j]; }
      if (gx) { ++w.below_x[i]; ++w.above_x[j]; }
      if (ly) { ++w.above_y[i]; ++w.below_y[j]; }
      if (gy) { ++w.below_y[i]; ++w.above_y[j]; }
      if (lx && ly) { ++w.above_xy[i]; ++w.below_xy[j]; }
      if (gx && gy) { ++w.below_xy[i]; ++w.above_xy[j]; }
      w.total.x += static_cast<unsigned>(lx) + static_cast<unsigned>(gx);
      w.total.y += static_cast<unsigned>(ly) + static_cast<unsigned>(gy);
      w.total.xy += static_cast<unsigned>(lx && ly) + static_cast<unsigned>(gx && gy);
    }
  }
  return w;
}

HoeffdingTerms terms_from_counts(const WindowCounts& w, std::size_t m) {
  const double denom = static_cast<double>(m) * static_cast<double>(m - 1);
  const double px = static_cast<double>(w.total.x) / denom;
  const double py = static_cast<double>(w.total.y) / denom;
  const double pxy = static_cast<double>(w.total.xy) / denom;
  const double inv = 1.0 / static_cast<double>(m - 1);
  HoeffdingTerms t;
  t.f1.resize(m);
  t.g1.resize(m);
  t.h1.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    t.f1[i] = 0.5 * (w.below_x[i] + w.above_x[i]) * inv - px;
    t.g1[i] = 0.5 * (w.below_y[i] + w.above_y[i]) * inv - py;
    t.h1[i] = 0.5 * (w.below_xy[i] + w.above_xy[i]) * inv - pxy;
  }
  return t;
}

VectorSamples windows_for(std::span<const double> s, int h) {
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  if (s.size() < static_cast<std::size_t>(h) + 2) {
    throw Error(ErrorKind::InsufficientData,
                "need at least h + 2 = " + std::to_string(h + 2) + " observations");
  }
  return sliding_windows(s, h);
}

}  // namespace

DominanceProbabilities dominance_counts(const VectorSamples& x_windows,
                                        const VectorSamples& y_windows,
                                        const KendallOptions& options) {
  check_windows(x_windows, y_windows);
  if (options.subsample_pairs && x_windows.rows() > kExactWindowLimit) {
    return subsampled_dominance(x_windows, y_windows, *options.subsample_pairs, options.seed);
  }
  return exact_dominance(x_windows, y_windows, options.threads);
}

double psi(double x, double y, double z) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) {
    throw Error(ErrorKind::DegenerateMarginal, "dominance probabilities (" + std::to_string(x) +
                                                   ", " + std::to_string(y) +
                                                   ") must lie strictly inside (0, 1)");
  }
  return (z - x * y) / std::sqrt(x * (1.0 - x) * y * (1.0 - y));
}

std::array<double, 3> grad_psi(double x, double y, double z) {
  const double value = psi(x, y, z);
  const double root = std::sqrt(x * (1.0 - x) * y * (1.0 - y));
  // d log root / dx = (1 - 2x) / (2 x (1 - x)), likewise for y.
  const double dx = -y / root - value * (1.0 - 2.0 * x) / (2.0 * x * (1.0 - x));
  const double dy = -x / root - value * (1.0 - 2.0 * y) / (2.0 * y * (1.0 - y));
  return {dx, dy, 1.0 / root};
}

HoeffdingTerms hoeffding_terms(const VectorSamples& x_windows, const VectorSamples& y_windows) {
  check_windows(x_windows, y_windows);
  return terms_from_counts(per_window_counts(x_windows, y_windows), x_windows.rows());
}

LongRunCovariance longrun_covariance(const HoeffdingTerms& terms,
                                     std::optional<std::size_t> bandwidth) {
  const std::size_t m = terms.f1.size();
  if (m < 2 || terms.g1.size() != m || terms.h1.size() != m) {
    throw Error(ErrorKind::InsufficientData, "Hoeffding term sequences too short or unequal");
  }
  const std::size_t b =
      bandwidth.value_or(static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(m)))));
  if (b >= m) {
    throw Error(ErrorKind::InvalidBandwidth,
                "bandwidth " + std::to_string(b) + " must be below " + std::to_string(m));
  }

  std::array<std::vector<double>, 3> c;
  const std::array<const std::vector<double>*, 3> src = {&terms.f1, &terms.g1, &terms.h1};
  for (std::size_t k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (double v : *src[k]) mean += v;
    mean /= static_cast<double>(m);
    c[k].resize(m);
    for (std::size_t t = 0; t < m; ++t) c[k][t] = (*src[k])[t] - mean;
  }
  auto autocov = [&](std::size_t a, std::size_t bb, std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < m; ++t) s += c[a][t] * c[bb][t + lag];
    return s / static_cast<double>(m);
  };

  LongRunCovariance out;
  out.bandwidth = b;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t bb = a; bb < 3; ++bb) {
      double s = autocov(a, bb, 0);
      for (std::size_t lag = 1; lag <= b; ++lag) {
        const double w = 1.0 - static_cast<double>(lag) / static_cast<double>(b + 1);
        s += w * (autocov(a, bb, lag) + autocov(bb, a, lag));
      }
      out.values[a * 3 + bb] = 4.0 * s;
      out.values[bb * 3 + a] = 4.0 * s;
    }
  }
  for (std::size_t a = 0; a < 3; ++a) {
    if (out.values[a * 4] < 0.0) {
      out.values[a * 4] = 0.0;
      out.clamped = true;
    }
  }
  return out;
}

DependenceEstimate kendall_tau(std::span<const double> x, std::span<const double> y, int h,
                               const KendallOptions& options) {
  if (x.size() != y.size()) throw Error(ErrorKind::InputMismatch, "series lengths differ");
  const auto xw = windows_for(x, h);
  const auto yw = windows_for(y, h);
  const auto p = dominance_counts(xw, yw, options);
  DependenceEstimate est;
  est.value = psi(p.p_x, p.p_y, p.p_xy);
  est.method = "kendall";
  est.h = h;
  est.n = x.size();
  return est;
}

DependenceEstimate kendall_tau_with_ci(std::span<const double> x, std::span<const double> y,
                                       int h, double confidence,
                                       std::optional<std::size_t> bandwidth) {
  if (x.size() != y.size()) throw Error(ErrorKind::InputMismatch, "series lengths differ");
  const auto xw = windows_for(x, h);
  const auto yw = windows_for(y, h);
  const std::size_t m = xw.rows();
  const auto counts = per_window_counts(xw, yw);
  const double denom = static_cast<double>(m) * static_cast<double>(m - 1);
  const double px = static_cast<double>(counts.total.x) / denom;
  const double py = static_cast<double>(counts.total.y) / denom;
  const double pxy = static_cast<double>(counts.total.xy) / denom;

  DependenceEstimate est;
  est.value = psi(px, py, pxy);
  est.method = "kendall";
  est.h = h;
  est.n = x.size();

  const auto cov = longrun_covariance(terms_from_counts(counts, m), bandwidth);
  const auto g = grad_psi(px, py, pxy);
  double sigma2 = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) sigma2 += g[a] * cov(a, b) * g[b];
  est.variance_clamped = cov.clamped;
  attach_normal_ci(est, sigma2 / static_cast<double>(m), confidence);
  est.variance_clamped = est.variance_clamped || cov.clamped;
  return est;
}

}  // namespace ordpat
