#include "ordpat/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numeric>
#include <thread>
#include <vector>

#include "ordpat/error.hpp"
#include "ordpat/kendall.hpp"
#include "ordpat/numerics.hpp"
#include "ordpat/opd.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {
namespace {

constexpr std::size_t kOrthantBlock = 1 << 16;
constexpr double kCholeskyJitter = 1e-12;

void check_correlation(double r) {
  if (!(std::abs(r) <= 1.0)) {
    throw Error(ErrorKind::InvalidCorrelation, "correlation " + std::to_string(r) + " outside [-1, 1]");
  }
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const auto d = cov.rows();
  Eigen::MatrixXd jittered = cov + (kCholeskyJitter * std::max(top, 1e-300)) *
                                       Eigen::MatrixXd::Identity(d, d);
  Eigen::LLT<Eigen::MatrixXd> llt(jittered);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidCovariance, "Cholesky factorization failed");
  }
  return llt.matrixL();
}

// Count of samples with L z <= 0. Coordinates are generated one at a time and
// the sample is abandoned at the first positive coordinate.
std::uint64_t orthant_hits(const Eigen::MatrixXd& lower, std::size_t count, std::uint64_t seed) {
  const auto d = static_cast<std::size_t>(lower.rows());
  std::vector<double> z(d);
  std::vector<double> l(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) l[i * d + j] = lower(i, j);
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < count; ++s) {
    bool inside = true;
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = rng.normal();
      double v = 0.0;
      for (std::size_t j = 0; j <= k; ++j) v += l[k * d + j] * z[j];
      if (v > 0.0) {
        inside = false;
        break;
      }
    }
    hits += inside;
  }
  return hits;
}

GaussianModel window_model(const std::vector<Eigen::Matrix2d>& gamma, int h) {
  // gamma[k] = Cov(W_{t+k}, W_t) with W_t = (X_t, Y_t).
  const int w = h + 1;
  Eigen::MatrixXd cov(2 * w, 2 * w);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j <= i; ++j) {
      const Eigen::Matrix2d& g = gamma[static_cast<std::size_t>(i - j)];
      cov(i, j) = cov(j, i) = g(0, 0);
      cov(w + i, w + j) = cov(w + j, w + i) = g(1, 1);
      cov(i, w + j) = cov(w + j, i) = g(0, 1);
      cov(w + i, j) = cov(j, w + i) = g(1, 0);
    }
  }
  return GaussianModel(cov);
}

void check_stationary_pair(double a, double b) {
  if (!(a * a + b * b < 1.0)) {
    throw Error(ErrorKind::NonStationary, "a^2 + b^2 must be below 1");
  }
}

void check_stationary(double rho) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::NonStationary, "|rho| must be below 1");
}

struct PatternOrthants {
  std::vector<McValue> joint, x, y;
};

PatternOrthants pattern_orthants(const GaussianModel& model, int h, std::size_t n_samples,
                                 std::uint64_t seed, unsigned threads) {
  const auto w = static_cast<Eigen::Index>(h) + 1;
  if (model.dimension() != static_cast<std::size_t>(2 * w)) {
    throw Error(ErrorKind::InvalidInput, "model dimension must be 2(h+1)");
  }
  const std::size_t k = pattern_count(h);
  PatternOrthants out;
  out.joint.resize(k);
  out.x.resize(k);
  out.y.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto perm = decode_pattern({static_cast<std::uint32_t>(c), h});
    const Eigen::MatrixXd d = increment_map(perm);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(2 * h, 2 * w);
    joint.topLeftCorner(h, w) = d;
    joint.bottomRightCorner(h, w) = d;
    Eigen::MatrixXd only_x = Eigen::MatrixXd::Zero(h, 2 * w);
    only_x.leftCols(w) = d;
    Eigen::MatrixXd only_y = Eigen::MatrixXd::Zero(h, 2 * w);
    only_y.rightCols(w) = d;
    out.joint[c] = mc_orthant(model.transformed(joint), n_samples, derive_seed(seed, {c, 0}), threads);
    out.x[c] = mc_orthant(model.transformed(only_x), n_samples, derive_seed(seed, {c, 1}), threads);
    out.y[c] = mc_orthant(model.transformed(only_y), n_samples, derive_seed(seed, {c, 2}), threads);
  }
  return out;
}

}  // namespace

GaussianModel::GaussianModel(Eigen::MatrixXd covariance) : cov_(std::move(covariance)) {
  if (cov_.rows() == 0 || cov_.rows() != cov_.cols()) {
    throw Error(ErrorKind::InvalidCovariance, "covariance must be a nonempty square matrix");
  }
  const double scale = std::max(cov_.cwiseAbs().maxCoeff(), 1e-300);
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidCovariance, "covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() < -1e-10 * top) {
    throw Error(ErrorKind::InvalidCovariance, "covariance is not positive semidefinite");
  }
}

GaussianModel GaussianModel::transformed(const Eigen::MatrixXd& map) const {
  return GaussianModel(map * cov_ * map.transpose());
}

double opd1_gaussian(double increment_corr) {
  check_correlation(increment_corr);
  return 2.0 / kPi * std::asin(increment_corr);
}

double bivariate_orthant(double rho) {
  check_correlation(rho);
  return 0.25 + std::asin(rho) / (2.0 * kPi);
}

double ar1_opd1(double a, double b) {
  check_stationary_pair(a, b);
  return opd1_gaussian(-b / std::sqrt(1.0 - a * a));
}

double shifted_ar1_opd1(double rho) {
  check_stationary(rho);
  return opd1_gaussian((rho - 1.0) / 2.0);
}

McValue mc_orthant(const GaussianModel& model, std::size_t n_samples, std::uint64_t seed,
                   unsigned threads) {
  if (model.dimension() > kOrthantMaxDimension) {
    throw Error(ErrorKind::InvalidInput, "orthant dimension above 16");
  }
  if (n_samples < kOrthantMinSamples) {
    throw Error(ErrorKind::InvalidInput, "at least 1000 samples required");
  }
  const Eigen::MatrixXd lower = cholesky_factor(model.covariance());
  const std::size_t blocks = (n_samples + kOrthantBlock - 1) / kOrthantBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < blocks; b += stride) {
      const std::size_t count = std::min(kOrthantBlock, n_samples - b * kOrthantBlock);
      hits[b] = orthant_hits(lower, count, derive_seed(seed, {b}));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
  }
  std::uint64_t total = 0;
  for (auto v : hits) total += v;
  const double n = static_cast<double>(n_samples);
  const double p = static_cast<double>(total) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

McValue kendall_gaussian(const GaussianModel& model, std::size_t n_samples, std::uint64_t seed,
                         unsigned threads) {
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  if (dim < 2 || dim % 2 != 0) throw Error(ErrorKind::InvalidInput, "model dimension must be even");
  const Eigen::Index w = dim / 2;
  Eigen::MatrixXd only_x = Eigen::MatrixXd::Zero(w, dim);
  only_x.leftCols(w) = Eigen::MatrixXd::Identity(w, w);
  Eigen::MatrixXd only_y = Eigen::MatrixXd::Zero(w, dim);
  only_y.rightCols(w) = Eigen::MatrixXd::Identity(w, w);

  const McValue px = mc_orthant(model.transformed(only_x), n_samples, derive_seed(seed, {0}), threads);
  const McValue py = mc_orthant(model.transformed(only_y), n_samples, derive_seed(seed, {1}), threads);
  const McValue pxy = mc_orthant(model, n_samples, derive_seed(seed, {2}), threads);

  const auto g = grad_psi(px.value, py.value, pxy.value);
  const double var = g[0] * g[0] * px.std_error * px.std_error +
                     g[1] * g[1] * py.std_error * py.std_error +
                     g[2] * g[2] * pxy.std_error * pxy.std_error;
  return {psi(px.value, py.value, pxy.value), std::sqrt(var)};
}

Eigen::MatrixXd increment_map(std::span<const int> permutation) {
  const auto w = static_cast<Eigen::Index>(permutation.size());
  if (w < 2) throw Error(ErrorKind::UnsupportedOrder, "permutation of at least two elements");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(w - 1, w);
  for (Eigen::Index j = 1; j < w; ++j) {
    d(j - 1, permutation[j]) += 1.0;
    d(j - 1, permutation[j - 1]) -= 1.0;
  }
  return d;
}

McValue opd_gaussian_decomposition(const GaussianModel& model, int h, std::size_t n_samples,
                                   std::uint64_t seed, unsigned threads) {
  const auto o = pattern_orthants(model, h, n_samples, seed, threads);
  const std::size_t k = o.joint.size();
  std::vector<double> v(k), w(k);
  double u = 0.0;
  double u_var = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    u += o.joint[c].value;
    u_var += o.joint[c].std_error * o.joint[c].std_error;
    v[c] = o.x[c].value;
    w[c] = o.y[c].value;
  }
  const double value = (u - std::inner_product(v.begin(), v.end(), w.begin(), 0.0)) /
                       (1.0 - std::inner_product(v.begin(), v.end(), w.begin(), 0.0));
  const auto g = grad_f(std::min(u, 1.0), v, w);
  double var = g[0] * g[0] * u_var;
  for (std::size_t c = 0; c < k; ++c) {
    var += g[1 + c] * g[1 + c] * o.x[c].std_error * o.x[c].std_error;
    var += g[1 + k + c] * g[1 + k + c] * o.y[c].std_error * o.y[c].std_error;
  }
  return {value, std::sqrt(var)};
}

McValue opd_gaussian_kendall_form(const GaussianModel& model, int h, std::size_t n_samples,
                                  std::uint64_t seed, unsigned threads) {
  const auto o = pattern_orthants(model, h, n_samples, seed, threads);
  const std::size_t k = o.joint.size();
  const std::size_t decreasing = 0;       // pattern (0, 1, ..., h)
  const std::size_t increasing = k - 1;   // pattern (h, ..., 1, 0)

  // Increments X_{i+1} - X_i <= 0 for all i, i.e. the decreasing pattern,
  // evaluated on an independent stream.
  const auto w = static_cast<Eigen::Index>(h) + 1;
  const std::vector<int> identity = decode_pattern({0, h});
  const Eigen::MatrixXd d = increment_map(identity);
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(2 * h, 2 * w);
  joint.topLeftCorner(h, w) = d;
  joint.bottomRightCorner(h, w) = d;
  Eigen::MatrixXd only_x = Eigen::MatrixXd::Zero(h, 2 * w);
  only_x.leftCols(w) = d;
  Eigen::MatrixXd only_y = Eigen::MatrixXd::Zero(h, 2 * w);
  only_y.rightCols(w) = d;
  const std::uint64_t s2 = derive_seed(seed, {0x6b656e64616c6cULL});
  const McValue j = mc_orthant(model.transformed(joint), n_samples, derive_seed(s2, {0}), threads);
  const McValue px = mc_orthant(model.transformed(only_x), n_samples, derive_seed(s2, {1}), threads);
  const McValue py = mc_orthant(model.transformed(only_y), n_samples, derive_seed(s2, {2}), threads);

  double s = 0.0;
  for (std::size_t c = 0; c < k; ++c) s += o.x[c].value * o.y[c].value;
  const double den = 1.0 - s;
  double num = 2.0 * (j.value - px.value * py.value);
  double var = 4.0 * (j.std_error * j.std_error +
                      py.value * py.value * px.std_error * px.std_error +
                      px.value * px.value * py.std_error * py.std_error);
  for (std::size_t c = 0; c < k; ++c) {
    if (c == decreasing || c == increasing) continue;
    num += o.joint[c].value - o.x[c].value * o.y[c].value;
    var += o.joint[c].std_error * o.joint[c].std_error +
           o.y[c].value * o.y[c].value * o.x[c].std_error * o.x[c].std_error +
           o.x[c].value * o.x[c].value * o.y[c].std_error * o.y[c].std_error;
  }
  return {num / den, std::sqrt(var) / den};
}

GaussianModel biv_ar1_window_model(double a, double b, int h, bool rotation) {
  check_stationary_pair(a, b);
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  Eigen::Matrix2d A;
  if (rotation) {
    A << a, b, -b, a;
  } else {
    A << a, b, b, -a;
  }
  const double sigma2 = 1.0 / (1.0 - a * a - b * b);
  std::vector<Eigen::Matrix2d> gamma;
  Eigen::Matrix2d power = Eigen::Matrix2d::Identity();
  for (int k = 0; k <= h; ++k) {
    gamma.push_back(sigma2 * power);
    power = A * power;
  }
  return window_model(gamma, h);
}

GaussianModel shifted_ar1_window_model(double rho, int h) {
  check_stationary(rho);
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  auto acov = [rho](int k) { return std::pow(rho, std::abs(k)) / (1.0 - rho * rho); };
  std::vector<Eigen::Matrix2d> gamma;
  for (int k = 0; k <= h; ++k) {
    Eigen::Matrix2d g;
    g << acov(k), acov(k - 1), acov(k + 1), acov(k);
    gamma.push_back(g);
  }
  return window_model(gamma, h);
}

GaussianModel iid_ar1_pair_window_model(double rho, int h) {
  check_stationary(rho);
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  std::vector<Eigen::Matrix2d> gamma;
  for (int k = 0; k <= h; ++k) {
    gamma.push_back(std::pow(rho, k) / (1.0 - rho * rho) * Eigen::Matrix2d::Identity());
  }
  return window_model(gamma, h);
}

GaussianModel block_column_window_model(double rho, int h) {
  check_correlation(rho);
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  std::vector<Eigen::Matrix2d> gamma(static_cast<std::size_t>(h) + 1, Eigen::Matrix2d::Zero());
  gamma[0] << 1.0, rho, rho, 1.0;
  return window_model(gamma, h);
}

}  // namespace ordpat
