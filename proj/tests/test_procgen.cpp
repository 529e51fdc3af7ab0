#include <doctest.h>

#include <cmath>
#include <vector>

#include "ordpat/error.hpp"
#include "ordpat/procgen.hpp"

using namespace ordpat;

namespace {

double corr(std::span<const double> a, std::span<const double> b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double lag1(const Series& s) {
  return corr(std::span(s).first(s.size() - 1), std::span(s).subspan(1));
}

Series diff(const Series& s, std::size_t lag = 1) {
  Series d(s.size() - lag);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = s[i + lag] - s[i + lag - 1];
  return d;
}

}  // namespace

TEST_CASE("independent AR(1) pair") {
  const auto w = gen_iid_ar1_pair(0.0, 100000, 1);
  CHECK(std::abs(lag1(w.x)) < 0.015);
  const auto s = gen_iid_ar1_pair(0.5, 1000000, 2);
  CHECK(lag1(s.x) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(lag1(s.y) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(corr(s.x, s.y)) < 0.01);
  const auto again = gen_iid_ar1_pair(0.5, 1000000, 2);
  CHECK(again.x == s.x);
  CHECK(again.y == s.y);
  CHECK_THROWS_AS(gen_iid_ar1_pair(1.0, 10, 3), Error);
}

TEST_CASE("block multinormal") {
  const auto z = gen_block_multinormal(0.0, 50000, 4);
  CHECK(std::abs(corr(z.x.column(0), z.y.column(1))) < 0.02);
  const auto v = gen_block_multinormal(0.2, 100000, 5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(corr(v.x.column(i), v.y.column(j)) - 0.2) < 0.01);
  CHECK(std::abs(corr(v.x.column(0), v.x.column(1))) < 0.01);
  CHECK_THROWS_AS(gen_block_multinormal(0.34, 10, 6), Error);
  CHECK_NOTHROW(gen_block_multinormal(1.0 / 3, 10, 6));
}

TEST_CASE("bivariate AR(1)") {
  const auto w = gen_biv_ar1(0.0, 0.0, 100000, 7, false);
  CHECK(std::abs(lag1(w.x)) < 0.015);
  CHECK(std::abs(corr(w.x, w.y)) < 0.015);
  const auto s = gen_biv_ar1(0.7, -0.7, 1000000, 8, false);
  double var = 0;
  for (double v : s.x) var += v * v;
  CHECK(var / s.x.size() == doctest::Approx(50.0).epsilon(0.1));
  CHECK(std::abs(corr(s.x, s.y)) < 0.05);
  CHECK(corr(diff(s.x), diff(s.y)) == doctest::Approx(0.7 / std::sqrt(0.51)).epsilon(0.01));
  CHECK_THROWS_AS(gen_biv_ar1(0.8, 0.8, 10, 9, false), Error);
}

TEST_CASE("bivariate AR(2)") {
  const auto w = gen_biv_ar2(0.0, 0.0, 50000, 10);
  CHECK(std::abs(corr(w.x, w.y)) < 0.02);
  // Corr(X_3 - X_2, Y_3 - Y_2) vanishes by construction; the process mixes
  // slowly (|eigenvalues| near 0.98), hence the long path.
  const auto s = gen_biv_ar2(0.01, 0.98, 1000000, 11);
  CHECK(std::abs(corr(diff(s.x), diff(s.y))) < 0.03);
  CHECK(s.x[0] != 0.0);
}

TEST_CASE("shifted AR(1)") {
  const auto s = gen_shifted_ar1(0.5, 200, 12);
  REQUIRE(s.x.size() == 200);
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) CHECK(s.y[i] == s.x[i + 1]);
}

TEST_CASE("process specifications") {
  CHECK(parse_family("biv-ar1-rotation") == Family::BivAr1Rotation);
  CHECK_THROWS_AS(parse_family("nope"), Error);
  CHECK(parameter_count(Family::BivAr2) == 2);
  ProcessSpec spec{Family::BivAr1, {0.7, -0.7}, 500, 42};
  CHECK(spec.describe() == "family=biv-ar1 a=0.7 b=-0.7 n=500 seed=42");
  const auto a = simulate_series(spec);
  const auto b = simulate_series(spec);
  CHECK(a.x.size() == 500);
  CHECK(a.x == b.x);
  ProcessSpec wrong{Family::BivAr1, {0.7}, 10, 1};
  CHECK_THROWS_AS(wrong.validate(), Error);
  ProcessSpec block{Family::BlockMultinormal, {0.2}, 100, 1};
  const auto flat = simulate_series(block);
  const auto v = gen_block_multinormal(0.2, 100, 1);
  REQUIRE(flat.x.size() == 300);
  CHECK(flat.x[100] == v.x.row(0)[1]);
}
