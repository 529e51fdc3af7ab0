#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "ordpat/harness.hpp"

using namespace ordpat;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in);
}

std::string config_error_key(const std::string& text) {
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

const char* kBase =
    "family = iid-ar1-pair\n"
    "params = 0.1, 0.5\n"
    "n = 100\n"
    "h = 1, 2\n"
    "methods = opd, kendall\n"
    "reps = 20\n"
    "seed = 3\n";

}  // namespace

TEST_CASE("summaries") {
  const auto s = summarize({1, 1, 1});
  CHECK(s.mean == 1.0);
  CHECK(s.sd == 0.0);
  CHECK(s.median == 1.0);
  CHECK(s.iqr == 0.0);
  CHECK(summarize({1, 2, 3, 4}).median == doctest::Approx(2.5));
  std::vector<double> seq;
  for (int i = 0; i <= 100; ++i) seq.push_back(i);
  CHECK(summarize(seq).iqr == doctest::Approx(50.0));
  CHECK(summarize({4, 1, 3, 2}).sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(summarize({7}).sd == 0.0);
  CHECK_THROWS_AS(summarize({}), Error);
  CHECK(quantile_sorted({0, 10}, 0.25) == doctest::Approx(2.5));
}

TEST_CASE("config parsing") {
  const auto c = parse(std::string("# comment\n") + kBase + "threads = 2 # trailing\n");
  CHECK(c.family == Family::IidAr1Pair);
  REQUIRE(c.params.size() == 2);
  CHECK(c.params[1].label == "0.5");
  CHECK(c.h_grid == std::vector<int>{1, 2});
  CHECK(c.methods.size() == 2);
  CHECK(c.reps == 20);
  CHECK(c.base_seed == 3);
  CHECK(c.threads == 2);

  const auto two = parse(
      "family = biv-ar1\nparams = 0.7/-0.7\nn = 500\nh = 1\nmethods = opd, pearson\nreps = 5\nseed = 1\n");
  REQUIRE(two.params.size() == 1);
  CHECK(two.params[0].values == std::vector<double>{0.7, -0.7});
  CHECK(two.params[0].label == "0.7/-0.7");
}

TEST_CASE("config errors name the key") {
  CHECK(config_error_key(std::string(kBase) + "colour = red\n") == "colour");
  CHECK(config_error_key("family = nope\nparams = 0.1\nn = 10\nh = 1\nmethods = opd\nseed = 1\n") == "family");
  CHECK(config_error_key("family = iid-ar1-pair\nparams = 0.1\nn = 10\nh = 1\nmethods = opd\n") == "seed");
  CHECK(config_error_key("family = iid-ar1-pair\nparams = 0.1\nn = 10\nh = 9\nmethods = opd\nseed = 1\n") == "h");
  CHECK(config_error_key("family = iid-ar1-pair\nparams = 1.5\nn = 10\nh = 1\nmethods = opd\nseed = 1\n") == "params");
  CHECK(config_error_key("family = iid-ar1-pair\nparams = 0.1\nn = 10\nh = 1\nmethods = magic\nseed = 1\n") == "methods");
  CHECK(config_error_key("family = iid-ar1-pair\nparams = 0.1\nn = 10\nh = 1\nmethods = opd\nseed = 1\nreps = 0\n") == "reps");
}

TEST_CASE("replication seeds are shared across methods and differ across cells") {
  const auto a = replication_seed(1, Family::IidAr1Pair, "0.5", 100, 1, 0);
  CHECK(a == replication_seed(1, Family::IidAr1Pair, "0.5", 100, 1, 0));
  CHECK(a != replication_seed(1, Family::IidAr1Pair, "0.5", 100, 1, 1));
  CHECK(a != replication_seed(1, Family::IidAr1Pair, "0.1", 100, 1, 0));
  CHECK(a != replication_seed(2, Family::IidAr1Pair, "0.5", 100, 1, 0));
}

TEST_CASE("experiments are deterministic and thread-count independent") {
  auto c = parse(kBase);
  const auto r1 = run_experiment(c);
  c.threads = 3;
  const auto r2 = run_experiment(c);
  std::ostringstream a, b;
  write_report_csv(r1, a);
  write_report_csv(r2, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(std::string(kReportHeader) + "\n", 0) == 0);
  CHECK(r1.rows.size() == 8);
  const auto* row = r1.find(Method::Kendall, "0.5", 100, 2);
  REQUIRE(row != nullptr);
  CHECK(row->reps == 20);
}

TEST_CASE("a single replication reports zero spread") {
  auto c = parse(kBase);
  c.reps = 1;
  const auto r = run_experiment(c);
  for (const auto& row : r.rows) {
    CHECK(row.stats.sd == 0.0);
    CHECK(row.stats.iqr == 0.0);
  }
}

TEST_CASE("kendall cells may use fewer replications") {
  auto c = parse(kBase);
  c.kendall_reps = 5;
  const auto r = run_experiment(c);
  CHECK(r.find(Method::Kendall, "0.1", 100, 1)->reps == 5);
  CHECK(r.find(Method::Opd, "0.1", 100, 1)->reps == 20);
}

TEST_CASE("failing replications are counted, not fatal") {
  // Two windows of width four always give a singular covariance matrix.
  auto c = parse(kBase);
  c.n_grid = {5};
  c.h_grid = {3};
  c.methods = {Method::Pearson};
  c.reps = 3;
  const auto r = run_experiment(c);
  for (const auto& row : r.rows) {
    CHECK(row.reps + row.failed == 3);
    CHECK(row.failed == 3);
  }
}
