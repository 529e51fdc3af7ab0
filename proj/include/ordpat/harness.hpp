#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ordpat/error.hpp"
#include "ordpat/procgen.hpp"

namespace ordpat {

enum class Method { Opd, Kendall, Pearson };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

/// A configuration problem, tagged with the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorKind::InvalidInput, "config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct ParameterPoint {
  std::vector<double> values;
  std::string label;  // "0.5" or "0.7/-0.7"
};

struct ExperimentConfig {
  Family family = Family::IidAr1Pair;
  std::vector<ParameterPoint> params;
  std::vector<std::size_t> n_grid;
  std::vector<int> h_grid;
  std::vector<Method> methods;
  std::size_t reps = 1000;
  /// Kendall is O(n^2); its cells may use fewer replications.
  std::optional<std::size_t> kendall_reps;
  std::uint64_t base_seed = 0;
  std::optional<std::size_t> subsample_pairs;
  unsigned threads = 1;

  void validate() const;
};

/// Flat "key = value" text; lists are comma separated and '#' starts a
/// comment. Keys: family, params, n, h, methods, reps, kendall_reps, seed,
/// subsample_pairs, threads. Two-parameter families write each grid point
/// as "a/b".
ExperimentConfig parse_experiment_config(std::istream& in);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double iqr = 0.0;
};

/// Mean, sd (denominator n-1, 0 for a single value), median and IQR with
/// linearly interpolated (type 7) quantiles.
Summary summarize(std::vector<double> samples);

/// Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct ReportRow {
  Method method = Method::Opd;
  Family family = Family::IidAr1Pair;
  std::string param;
  std::size_t n = 0;
  int h = 1;
  Summary stats;
  std::size_t reps = 0;    // successful replications
  std::size_t failed = 0;  // replications whose estimator raised
};

struct ExperimentReport {
  std::vector<ReportRow> rows;

  const ReportRow* find(Method method, std::string_view param, std::size_t n, int h) const;
};

/// Replication seed; depends on the cell but not on the method, so all
/// methods of a cell see the same simulated paths.
std::uint64_t replication_seed(std::uint64_t base_seed, Family family, std::string_view param,
                               std::size_t n, int h, std::size_t rep);

ExperimentReport run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kReportHeader = "method,family,param,n,h,mean,sd,median,iqr,reps";

void write_report_csv(const ExperimentReport& report, std::ostream& out);

}  // namespace ordpat
