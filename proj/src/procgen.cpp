#include "ordpat/procgen.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ordpat/error.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {
namespace {

void check_rho(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorKind::NonStationary, "|rho| = " + std::to_string(std::abs(rho)) + " >= 1");
  }
}

void check_ab(double a, double b) {
  if (!(a * a + b * b < 1.0)) {
    throw Error(ErrorKind::NonStationary, "a^2 + b^2 = " + std::to_string(a * a + b * b) + " >= 1");
  }
}

Series ar1_path(double rho, std::size_t n, Rng& rng) {
  Series out(n);
  if (n == 0) return out;
  out[0] = rng.normal() / std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 1; i < n; ++i) out[i] = rho * out[i - 1] + rng.normal();
  return out;
}

Eigen::MatrixXd block_covariance(double rho) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(6, 6);
  cov.topRightCorner(3, 3).setConstant(rho);
  cov.bottomLeftCorner(3, 3).setConstant(rho);
  return cov;
}

void check_block(double rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_covariance(rho), Eigen::EigenvaluesOnly);
  if (!std::isfinite(rho) || es.eigenvalues().minCoeff() < -1e-10 * es.eigenvalues().maxCoeff()) {
    throw Error(ErrorKind::InvalidCovariance,
                "block covariance with rho = " + std::to_string(rho) +
                    " is not positive semidefinite (requires |rho| <= 1/3)");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::IidAr1Pair: return "iid-ar1-pair";
    case Family::BlockMultinormal: return "block-multinormal";
    case Family::BivAr1: return "biv-ar1";
    case Family::BivAr1Rotation: return "biv-ar1-rotation";
    case Family::BivAr2: return "biv-ar2";
    case Family::ShiftedAr1: return "shifted-ar1";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::IidAr1Pair, Family::BlockMultinormal, Family::BivAr1,
                 Family::BivAr1Rotation, Family::BivAr2, Family::ShiftedAr1}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidInput, "unknown process family '" + std::string(name) + "'");
}

std::size_t parameter_count(Family family) noexcept {
  switch (family) {
    case Family::BivAr1:
    case Family::BivAr1Rotation:
    case Family::BivAr2:
      return 2;
    default:
      return 1;
  }
}

void ProcessSpec::validate() const {
  if (params.size() != parameter_count(family)) {
    throw Error(ErrorKind::InvalidInput, std::string(to_string(family)) + " takes " +
                                             std::to_string(parameter_count(family)) +
                                             " parameter(s)");
  }
  switch (family) {
    case Family::IidAr1Pair:
    case Family::ShiftedAr1:
      check_rho(params[0]);
      break;
    case Family::BlockMultinormal:
      check_block(params[0]);
      break;
    default:
      check_ab(params[0], params[1]);
  }
}

std::string ProcessSpec::describe() const {
  std::ostringstream os;
  os << "family=" << to_string(family);
  if (parameter_count(family) == 1) {
    os << " rho=" << format_double(params.at(0));
  } else {
    os << " a=" << format_double(params.at(0)) << " b=" << format_double(params.at(1));
  }
  os << " n=" << n << " seed=" << seed;
  return os.str();
}

SeriesPair gen_iid_ar1_pair(double rho, std::size_t n, std::uint64_t seed) {
  check_rho(rho);
  Rng rx(derive_seed(seed, {0}));
  Rng ry(derive_seed(seed, {1}));
  SeriesPair out;
  out.x = ar1_path(rho, n, rx);
  out.y = ar1_path(rho, n, ry);
  return out;
}

VectorPair gen_block_multinormal(double rho, std::size_t n, std::uint64_t seed) {
  check_block(rho);
  const Eigen::MatrixXd cov = block_covariance(rho);
  // Jitter keeps the boundary case |rho| = 1/3 factorizable.
  Eigen::LLT<Eigen::MatrixXd> llt(cov + 1e-12 * Eigen::MatrixXd::Identity(6, 6));
  const Eigen::MatrixXd lower = llt.matrixL();
  Rng rng(derive_seed(seed, {0}));
  VectorPair out{VectorSamples(n, 3), VectorSamples(n, 3)};
  Eigen::Matrix<double, 6, 1> z;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 6; ++k) z[k] = rng.normal();
    const Eigen::VectorXd v = lower * z;
    auto xr = out.x.row(i);
    auto yr = out.y.row(i);
    for (int k = 0; k < 3; ++k) {
      xr[k] = v[k];
      yr[k] = v[3 + k];
    }
  }
  return out;
}

SeriesPair gen_biv_ar1(double a, double b, std::size_t n, std::uint64_t seed, bool rotation) {
  check_ab(a, b);
  const double c = rotation ? -b : b;
  const double d = rotation ? a : -a;
  Rng rng(derive_seed(seed, {0}));
  SeriesPair out{Series(n), Series(n)};
  if (n == 0) return out;
  const double sd = 1.0 / std::sqrt(1.0 - a * a - b * b);
  out.x[0] = sd * rng.normal();
  out.y[0] = sd * rng.normal();
  for (std::size_t i = 1; i < n; ++i) {
    const double eps = rng.normal();
    const double eta = rng.normal();
    out.x[i] = a * out.x[i - 1] + b * out.y[i - 1] + eps;
    out.y[i] = c * out.x[i - 1] + d * out.y[i - 1] + eta;
  }
  return out;
}

SeriesPair gen_biv_ar2(double a, double b, std::size_t n, std::uint64_t seed) {
  check_ab(a, b);
  Rng rng(derive_seed(seed, {0}));
  SeriesPair out{Series(n), Series(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = rng.normal();
    const double eta = rng.normal();
    if (i < 2) {
      out.x[i] = eps;
      out.y[i] = eta;
    } else {
      out.x[i] = a * out.x[i - 2] + b * out.y[i - 2] + eps;
      out.y[i] = b * out.x[i - 2] - a * out.y[i - 2] + eta;
    }
  }
  return out;
}

SeriesPair gen_shifted_ar1(double rho, std::size_t n, std::uint64_t seed) {
  check_rho(rho);
  Rng rng(derive_seed(seed, {0}));
  const Series path = ar1_path(rho, n + 1, rng);
  SeriesPair out;
  out.x.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n));
  out.y.assign(path.begin() + 1, path.end());
  return out;
}

SeriesPair simulate_series(const ProcessSpec& spec) {
  spec.validate();
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::IidAr1Pair: return gen_iid_ar1_pair(p[0], spec.n, spec.seed);
    case Family::BlockMultinormal: {
      const auto v = gen_block_multinormal(p[0], spec.n, spec.seed);
      SeriesPair out;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto xc = v.x.column(k);
        const auto yc = v.y.column(k);
        out.x.insert(out.x.end(), xc.begin(), xc.end());
        out.y.insert(out.y.end(), yc.begin(), yc.end());
      }
      return out;
    }
    case Family::BivAr1: return gen_biv_ar1(p[0], p[1], spec.n, spec.seed, false);
    case Family::BivAr1Rotation: return gen_biv_ar1(p[0], p[1], spec.n, spec.seed, true);
    case Family::BivAr2: return gen_biv_ar2(p[0], p[1], spec.n, spec.seed);
    case Family::ShiftedAr1: return gen_shifted_ar1(p[0], spec.n, spec.seed);
  }
  throw Error(ErrorKind::InvalidInput, "unhandled family");
}

}  // namespace ordpat
