#include "ordpat/pearson.hpp"

#include <algorithm>
#include <string>

#include "ordpat/error.hpp"
#include "ordpat/samples.hpp"

namespace ordpat {
namespace {

void check_positive_definite(const Eigen::MatrixXd& s, const char* name) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0) || ev.minCoeff() <= kPositiveDefiniteEpsilon * top) {
    throw Error(ErrorKind::SingularCovariance,
                std::string(name) + " window covariance is numerically singular");
  }
}

}  // namespace

WindowCovariances window_covariances(std::span<const double> x, std::span<const double> y, int h) {
  if (x.size() != y.size()) throw Error(ErrorKind::InputMismatch, "series lengths differ");
  if (h < 1) throw Error(ErrorKind::UnsupportedOrder, "order must be >= 1");
  if (x.size() < static_cast<std::size_t>(h) + 2) {
    throw Error(ErrorKind::InsufficientData, "need at least h + 2 observations");
  }
  const auto xw = sliding_windows(x, h);
  const auto yw = sliding_windows(y, h);
  const auto m = static_cast<Eigen::Index>(xw.rows());
  const auto d = static_cast<Eigen::Index>(xw.dim());

  Eigen::MatrixXd xm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                      Eigen::RowMajor>>(xw.data().data(), m, d);
  Eigen::MatrixXd ym = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                      Eigen::RowMajor>>(yw.data().data(), m, d);
  xm.rowwise() -= xm.colwise().mean();
  ym.rowwise() -= ym.colwise().mean();
  const double scale = 1.0 / static_cast<double>(m - 1);

  WindowCovariances out;
  out.sigma_x = scale * (xm.transpose() * xm);
  out.sigma_y = scale * (ym.transpose() * ym);
  out.sigma_xy = scale * (xm.transpose() * ym);
  out.windows = static_cast<std::size_t>(m);
  return out;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double pearson_mv(const WindowCovariances& cov) {
  check_positive_definite(cov.sigma_x, "X");
  check_positive_definite(cov.sigma_y, "Y");
  const Eigen::MatrixXd rx = symmetric_sqrt(cov.sigma_x);
  const Eigen::MatrixXd inner = rx * cov.sigma_y * rx;
  const double denominator = symmetric_sqrt(inner).trace();
  return cov.sigma_xy.trace() / denominator;
}

DependenceEstimate pearson_mv(std::span<const double> x, std::span<const double> y, int h) {
  DependenceEstimate est;
  est.value = pearson_mv(window_covariances(x, y, h));
  est.method = "pearson";
  est.h = h;
  est.n = x.size();
  return est;
}

}  // namespace ordpat
