#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ordpat/error.hpp"
#include "ordpat/opd.hpp"
#include "ordpat/procgen.hpp"
#include "ordpat/rng.hpp"

using namespace ordpat;

namespace {

Series noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Series s(n);
  for (auto& v : s) v = rng.normal();
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

TEST_CASE("plug-in formula") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(opd_plugin(1.0, half, half) == doctest::Approx(1.0));
  CHECK(opd_plugin(0.5, half, half) == doctest::Approx(0.0));
  CHECK(opd_plugin(0.75, half, half) == doctest::Approx(2 * 0.75 - 1));
  const std::vector<double> mono{1.0, 0.0};
  CHECK_THROWS_AS(opd_plugin(1.0, mono, mono), Error);
}

TEST_CASE("identical series have dependence one") {
  const auto x = noise(200, 1);
  for (int h = 1; h <= 3; ++h) CHECK(opd_from_series(x, x, h).value == doctest::Approx(1.0));
}

TEST_CASE("mirrored series give the zero-match value") {
  const auto x = noise(300, 2);
  Series y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
  const auto qx = pattern_counts(pattern_sequence(x, 1)).relative();
  const auto qy = pattern_counts(pattern_sequence(y, 1)).relative();
  const double s = dot(qx, qy);
  CHECK(opd_from_series(x, y, 1).value == doctest::Approx(-s / (1 - s)));
  CHECK(signed_opd(x, y, 1) == doctest::Approx(-1.0));
  CHECK(signed_opd(x, x, 1) == doctest::Approx(1.0));
}

TEST_CASE("signed dependence of independent noise is small") {
  const auto x = noise(10000, 3);
  const auto y = noise(10000, 4);
  CHECK(std::abs(signed_opd(x, y, 1)) < 0.05);
}

TEST_CASE("series errors") {
  const auto x = noise(10, 5);
  CHECK_THROWS_AS(opd_from_series(x, noise(9, 6), 1), Error);
  CHECK_THROWS_AS(opd_from_series(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 1), Error);
  const Series up{1, 2, 3, 4, 5};
  try {
    opd_from_series(up, up, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDenominator);
  }
}

TEST_CASE("shift pairs x windows with later y windows") {
  const auto x = noise(400, 7);
  Series y(x.size(), 0.0);
  for (std::size_t i = 0; i + 2 < x.size(); ++i) y[i + 2] = x[i];
  CHECK(opd_from_series(x, y, 2, 2).value == doctest::Approx(1.0));
  CHECK(opd_from_series(x, y, 2, 2).shift == 2);
}

TEST_CASE("joint pattern tables") {
  const auto x = noise(50, 8);
  const auto codes = pattern_sequence(x, 2);
  const auto t = joint_pattern_table(codes, codes);
  CHECK(t.total == codes.size());
  CHECK(t.matches() == t.total);
  for (std::size_t i = 0; i < t.cells; ++i)
    for (std::size_t j = 0; j < t.cells; ++j)
      if (i != j) CHECK(t.at(i, j) == 0);

  const auto a = pattern_sequence(noise(200000, 9), 1);
  const auto b = pattern_sequence(noise(200000, 10), 1);
  const auto ind = joint_pattern_table(a, b);
  const auto qx = ind.x_marginal().relative();
  const auto qy = ind.y_marginal().relative();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(static_cast<double>(ind.at(i, j)) / ind.total == doctest::Approx(qx[i] * qy[j]).epsilon(0.02));
}

TEST_CASE("indicator covariance") {
  // Balanced independent table at h = 1.
  JointPatternTable t;
  t.order = 1;
  t.cells = 2;
  t.counts = {25, 25, 25, 25};
  t.total = 100;
  const auto cov = opd_iid_covariance(t);
  REQUIRE(cov.dim == 5);
  CHECK(cov(1, 1) == doctest::Approx(0.25));
  CHECK(cov(1, 2) == doctest::Approx(-0.25));
  CHECK(cov(2, 2) == doctest::Approx(0.25));
  for (std::size_t i = 0; i < cov.dim; ++i)
    for (std::size_t j = 0; j < cov.dim; ++j) CHECK(cov(i, j) == cov(j, i));

  t.counts = {50, 0, 0, 50};
  CHECK(opd_iid_covariance(t)(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("gradient of the plug-in map") {
  const std::vector<double> v{0.3, 0.7};
  const std::vector<double> w{0.6, 0.4};
  const auto g1 = grad_f(1.0, v, w);
  for (std::size_t k = 1; k < g1.size(); ++k) CHECK(g1[k] == doctest::Approx(0.0));
  const std::vector<double> zero{0.0, 0.0};
  CHECK(grad_f(0.4, zero, w)[0] == doctest::Approx(1.0));

  const auto f = [](double u, const std::vector<double>& vv, const std::vector<double>& ww) {
    const double s = dot(vv, ww);
    return (u - s) / (1 - s);
  };
  const double u = 0.55;
  const auto g = grad_f(u, v, w);
  const double step = 1e-6;
  CHECK(g[0] == doctest::Approx((f(u + step, v, w) - f(u - step, v, w)) / (2 * step)).epsilon(1e-6));
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto vp = v, vm = v, wp = w, wm = w;
    vp[i] += step;
    vm[i] -= step;
    wp[i] += step;
    wm[i] -= step;
    CHECK(g[1 + i] == doctest::Approx((f(u, vp, w) - f(u, vm, w)) / (2 * step)).epsilon(1e-6));
    CHECK(g[3 + i] == doctest::Approx((f(u, v, wp) - f(u, v, wm)) / (2 * step)).epsilon(1e-6));
  }
}

TEST_CASE("i.i.d. estimate with interval") {
  const auto v = gen_block_multinormal(0.2, 2000, 11);
  const auto est = opd_iid_estimate(v.x, v.y, 0.95);
  REQUIRE(est.variance);
  CHECK(*est.variance > 0.0);
  CHECK(*est.ci_low < est.value);
  CHECK(*est.ci_high > est.value);
  CHECK(est.method == "opd-iid");

  const auto same = opd_iid_estimate(v.x, v.x);
  CHECK(same.value == doctest::Approx(1.0));
  CHECK(*same.variance == doctest::Approx(0.0));
}

TEST_CASE("interval coverage under independence") {
  int covered = 0;
  constexpr int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const auto v = gen_block_multinormal(0.0, 5000, derive_seed(12, {static_cast<std::uint64_t>(r)}));
    const auto est = opd_iid_estimate(v.x, v.y, 0.95);
    if (*est.ci_low <= 0.0 && 0.0 <= *est.ci_high) ++covered;
  }
  // Binomial sd at 0.95 with 300 reps is about 0.0126.
  CHECK(std::abs(covered / static_cast<double>(reps) - 0.95) < 0.04);
}
