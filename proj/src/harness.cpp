#include "ordpat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "ordpat/format.hpp"
#include "ordpat/kendall.hpp"
#include "ordpat/opd.hpp"
#include "ordpat/pearson.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_value(const std::string& key, std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, value);
  if (token.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError(key, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

double estimate(Method method, const SeriesPair& s, int h, const ExperimentConfig& cfg,
                std::uint64_t seed) {
  switch (method) {
    case Method::Opd: return opd_from_series(s.x, s.y, h).value;
    case Method::Kendall: {
      KendallOptions opt;
      opt.subsample_pairs = cfg.subsample_pairs;
      opt.seed = derive_seed(seed, {0x6b});
      return kendall_tau(s.x, s.y, h, opt).value;
    }
    case Method::Pearson: return pearson_mv(s.x, s.y, h).value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Opd: return "opd";
    case Method::Kendall: return "kendall";
    case Method::Pearson: return "pearson";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::Opd, Method::Kendall, Method::Pearson}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::InvalidInput, "unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (params.empty()) throw ConfigError("params", "empty grid");
  if (n_grid.empty()) throw ConfigError("n", "empty grid");
  if (h_grid.empty()) throw ConfigError("h", "empty grid");
  if (methods.empty()) throw ConfigError("methods", "no methods");
  if (reps < 1) throw ConfigError("reps", "must be at least 1");
  if (kendall_reps && *kendall_reps < 1) throw ConfigError("kendall_reps", "must be at least 1");
  for (const auto& p : params) {
    ProcessSpec spec{family, p.values, 0, 0};
    try {
      spec.validate();
    } catch (const Error& e) {
      throw ConfigError("params", e.what());
    }
  }
  for (int h : h_grid) {
    if (h < 1 || h > 8) throw ConfigError("h", "order " + std::to_string(h) + " outside [1, 8]");
    for (auto n : n_grid) {
      if (n < static_cast<std::size_t>(h) + 2) {
        throw ConfigError("n", "length " + std::to_string(n) + " too short for h = " +
                                   std::to_string(h));
      }
    }
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(view), "expected 'key = value'");
    }
    kv[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
  }

  static const std::vector<std::string> known = {"family", "params",  "n",
                                                 "h",      "methods", "reps",
                                                 "kendall_reps", "seed", "subsample_pairs",
                                                 "threads"};
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) throw ConfigError(key, "missing");
    return it->second;
  };

  ExperimentConfig cfg;
  try {
    cfg.family = parse_family(require("family"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("family", e.what());
  }

  const std::size_t arity = parameter_count(cfg.family);
  for (auto token : split_list(require("params"))) {
    ParameterPoint point;
    point.label = std::string(token);
    std::string_view rest = token;
    while (true) {
      const auto slash = rest.find('/');
      point.values.push_back(parse_value<double>("params", trim(rest.substr(0, slash))));
      if (slash == std::string_view::npos) break;
      rest.remove_prefix(slash + 1);
    }
    if (point.values.size() != arity) {
      throw ConfigError("params", "'" + point.label + "' needs " + std::to_string(arity) +
                                      " value(s) for " + std::string(to_string(cfg.family)));
    }
    cfg.params.push_back(std::move(point));
  }
  for (auto token : split_list(require("n"))) cfg.n_grid.push_back(parse_value<std::size_t>("n", token));
  for (auto token : split_list(require("h"))) cfg.h_grid.push_back(parse_value<int>("h", token));
  for (auto token : split_list(require("methods"))) {
    try {
      cfg.methods.push_back(parse_method(token));
    } catch (const Error& e) {
      throw ConfigError("methods", e.what());
    }
  }
  if (kv.count("reps")) cfg.reps = parse_value<std::size_t>("reps", kv["reps"]);
  if (kv.count("kendall_reps")) cfg.kendall_reps = parse_value<std::size_t>("kendall_reps", kv["kendall_reps"]);
  cfg.base_seed = parse_value<std::uint64_t>("seed", require("seed"));
  if (kv.count("subsample_pairs")) {
    cfg.subsample_pairs = parse_value<std::size_t>("subsample_pairs", kv["subsample_pairs"]);
  }
  if (kv.count("threads")) cfg.threads = parse_value<unsigned>("threads", kv["threads"]);
  cfg.validate();
  return cfg;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::InsufficientData, "quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorKind::InsufficientData, "nothing to summarize");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  std::sort(samples.begin(), samples.end());
  Summary s;
  s.mean = mean;
  s.sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.median = quantile_sorted(samples, 0.5);
  s.iqr = quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25);
  return s;
}

const ReportRow* ExperimentReport::find(Method method, std::string_view param, std::size_t n,
                                        int h) const {
  for (const auto& r : rows) {
    if (r.method == method && r.param == param && r.n == n && r.h == h) return &r;
  }
  return nullptr;
}

std::uint64_t replication_seed(std::uint64_t base_seed, Family family, std::string_view param,
                               std::size_t n, int h, std::size_t rep) {
  return derive_seed(base_seed, {hash_string(to_string(family)), hash_string(param), n,
                                 static_cast<std::uint64_t>(h), rep});
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  const unsigned threads = std::max(1u, config.threads);

  for (const auto& point : config.params) {
    for (const auto n : config.n_grid) {
      for (const int h : config.h_grid) {
        // One slot per (method, replication); workers write disjoint slots.
        const std::size_t k = config.methods.size();
        std::vector<std::vector<double>> values(k, std::vector<double>(config.reps, 0.0));
        std::vector<std::vector<char>> ok(k, std::vector<char>(config.reps, 0));
        auto replicate = [&](std::size_t rep) {
          const std::uint64_t seed = replication_seed(config.base_seed, config.family, point.label,
                                                      n, h, rep);
          const SeriesPair path = simulate_series({config.family, point.values, n, seed});
          for (std::size_t i = 0; i < k; ++i) {
            const Method m = config.methods[i];
            if (m == Method::Kendall && config.kendall_reps && rep >= *config.kendall_reps) continue;
            try {
              values[i][rep] = estimate(m, path, h, config, seed);
              ok[i][rep] = 1;
            } catch (const Error&) {
              ok[i][rep] = 0;
            }
          }
        };
        if (threads == 1) {
          for (std::size_t r = 0; r < config.reps; ++r) replicate(r);
        } else {
          std::vector<std::jthread> pool;
          for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
              for (std::size_t r = t; r < config.reps; r += threads) replicate(r);
            });
          }
        }

        for (std::size_t i = 0; i < k; ++i) {
          const Method m = config.methods[i];
          const std::size_t attempted =
              (m == Method::Kendall && config.kendall_reps) ? std::min(config.reps, *config.kendall_reps)
                                                            : config.reps;
          std::vector<double> good;
          for (std::size_t r = 0; r < attempted; ++r)
            if (ok[i][r]) good.push_back(values[i][r]);
          ReportRow row;
          row.method = m;
          row.family = config.family;
          row.param = point.label;
          row.n = n;
          row.h = h;
          row.reps = good.size();
          row.failed = attempted - good.size();
          if (good.empty()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.stats = {nan, nan, nan, nan};
          } else {
            row.stats = summarize(std::move(good));
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << to_string(r.family) << ',' << r.param << ',' << r.n << ','
        << r.h << ',' << format_number(r.stats.mean) << ',' << format_number(r.stats.sd) << ','
        << format_number(r.stats.median) << ',' << format_number(r.stats.iqr) << ',' << r.reps
        << '\n';
  }
}

}  // namespace ordpat
