#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "ordpat/error.hpp"
#include "ordpat/format.hpp"
#include "ordpat/gaussian.hpp"
#include "ordpat/harness.hpp"
#include "ordpat/kendall.hpp"
#include "ordpat/opd.hpp"
#include "ordpat/pearson.hpp"
#include "ordpat/procgen.hpp"
#include "ordpat/rng.hpp"

namespace ordpat::cli {
namespace {

// Input problems that map to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
  cell = trim(cell);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(cell) +
                     "' as a finite number");
  }
  return v;
}

struct SeriesFile {
  Series x;
  Series y;
};

// Header row must name columns "x" and "y"; other columns are ignored.
SeriesFile read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("line 1: missing header");
  const auto header = split(trim(line), ',');
  std::optional<std::size_t> xi, yi;
  for (std::size_t k = 0; k < header.size(); ++k) {
    const auto name = trim(header[k]);
    if (name == "x") xi = k;
    if (name == "y") yi = k;
  }
  if (!xi || !yi) throw InputError("line 1: header must contain columns 'x' and 'y'");

  SeriesFile file;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    file.x.push_back(parse_cell(cells[*xi], line_no));
    file.y.push_back(parse_cell(cells[*yi], line_no));
  }
  return file;
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

struct EstimateArgs {
  std::string input;
  std::string method = "opd";
  int h = 1;
  std::size_t shift = 0;
  double confidence = 0.95;
  bool header = false;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto file = read_series_file(a.input);
  const std::span<const double> x(file.x);
  const std::span<const double> y(file.y);
  const std::size_t n = x.size();
  if (a.shift >= n) throw Error(ErrorKind::InsufficientData, "shift exceeds series length");
  // Pairs (x_t, y_{t+shift}) for the estimators that take aligned series.
  const auto xs = x.first(n - a.shift);
  const auto ys = y.subspan(a.shift);

  DependenceEstimate est;
  if (a.method == "opd") {
    est = opd_from_series(x, y, a.h, a.shift);
  } else if (a.method == "opd-signed") {
    est.value = signed_opd(xs, ys, a.h);
  } else if (a.method == "kendall") {
    est = kendall_tau_with_ci(xs, ys, a.h, a.confidence);
  } else {
    est = pearson_mv(xs, ys, a.h);
  }

  if (a.header) out << "method,h,shift,n,value,variance,ci_low,ci_high\n";
  out << a.method << ',' << a.h << ',' << a.shift << ',' << n << ',' << format_number(est.value)
      << ',' << optional_field(est.variance) << ',' << optional_field(est.ci_low) << ','
      << optional_field(est.ci_high) << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string family;
  std::optional<double> rho, a, b;
  std::size_t n = 500;
  std::uint64_t seed = 0;
  std::string out_path;
};

ProcessSpec resolve_spec(const SimulateArgs& s) {
  ProcessSpec spec;
  try {
    spec.family = parse_family(s.family);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (parameter_count(spec.family) == 1) {
    if (!s.rho) throw InputError("--rho is required for " + s.family);
    spec.params = {*s.rho};
  } else {
    if (!s.a || !s.b) throw InputError("--a and --b are required for " + s.family);
    spec.params = {*s.a, *s.b};
  }
  spec.n = s.n;
  spec.seed = s.seed;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return spec;
}

int cmd_simulate(const SimulateArgs& s, std::ostream& out) {
  const auto spec = resolve_spec(s);
  std::ofstream file(s.out_path);
  if (!file) throw InputError("cannot write '" + s.out_path + "'");
  if (spec.family == Family::BlockMultinormal) {
    const auto v = gen_block_multinormal(spec.params[0], spec.n, spec.seed);
    file << "x1,x2,x3,y1,y2,y3\n";
    for (std::size_t i = 0; i < v.x.rows(); ++i) {
      const auto xr = v.x.row(i);
      const auto yr = v.y.row(i);
      file << format_number(xr[0]) << ',' << format_number(xr[1]) << ',' << format_number(xr[2])
           << ',' << format_number(yr[0]) << ',' << format_number(yr[1]) << ','
           << format_number(yr[2]) << '\n';
    }
  } else {
    const auto p = simulate_series(spec);
    file << "x,y\n";
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      file << format_number(p.x[i]) << ',' << format_number(p.y[i]) << '\n';
    }
  }
  out << spec.describe() << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out_path;
  std::optional<unsigned> threads;
};

int cmd_experiment(const ExperimentArgs& e, std::ostream& out) {
  std::ifstream in(e.config);
  if (!in) throw InputError("cannot open '" + e.config + "'");
  auto config = parse_experiment_config(in);
  if (const char* env = std::getenv("ORDPAT_SEED"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("seed", "ORDPAT_SEED is not an unsigned integer");
    }
    config.base_seed = seed;
  }
  if (e.threads) config.threads = *e.threads;
  config.validate();

  const auto report = run_experiment(config);
  std::ofstream file(e.out_path);
  if (!file) throw InputError("cannot write '" + e.out_path + "'");
  write_report_csv(report, file);

  std::size_t failed = 0;
  for (const auto& row : report.rows) failed += row.failed;
  std::ofstream meta(e.out_path + ".meta");
  if (!meta) throw InputError("cannot write '" + e.out_path + ".meta'");
  meta << "version=" << ORDPAT_VERSION << '\n'
       << "rng=" << kRngName << '\n'
       << "threads=" << config.threads << '\n'
       << "seed=" << config.base_seed << '\n'
       << "reps=" << config.reps << '\n'
       << "kendall_reps=" << config.kendall_reps.value_or(config.reps) << '\n'
       << "windows=overlapping\n"
       << "failed_reps=" << failed << '\n';
  for (const auto& row : report.rows) {
    if (row.failed == 0) continue;
    meta << "failed[" << to_string(row.method) << ',' << row.param << ',' << row.n << ','
         << row.h << "]=" << row.failed << '\n';
  }
  out << "wrote " << report.rows.size() << " rows to " << e.out_path << '\n';
  return kExitOk;
}

struct AnalyticArgs {
  std::string formula;
  std::optional<double> rho, a, b;
};

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw InputError(std::string(flag) + " is required");
  return *v;
}

int cmd_analytic(const AnalyticArgs& a, std::ostream& out) {
  double value = 0.0;
  if (a.formula == "opd1-gauss") {
    value = opd1_gaussian(require(a.rho, "--rho"));
  } else if (a.formula == "ar1-opd1") {
    value = ar1_opd1(require(a.a, "--a"), require(a.b, "--b"));
  } else if (a.formula == "shifted-ar1-opd1") {
    value = shifted_ar1_opd1(require(a.rho, "--rho"));
  } else {
    value = bivariate_orthant(require(a.rho, "--rho"));
  }
  out << format_number(value) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ordinal pattern dependence and multivariate dependence measures"};
  app.set_version_flag("--version", std::string(ORDPAT_VERSION));
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate dependence from an x,y CSV file");
  estimate->set_help_flag("--help", "Print this help message and exit");
  estimate->add_option("input", est.input, "CSV file with columns x and y")->required();
  estimate->add_option("-m,--method", est.method, "opd, opd-signed, kendall or pearson")
      ->check(CLI::IsMember({"opd", "opd-signed", "kendall", "pearson"}));
  estimate->add_option("--h", est.h, "Pattern order")->check(CLI::Range(1, 8));
  estimate->add_option("--shift", est.shift, "Lag applied to y");
  estimate->add_option("--confidence", est.confidence, "Confidence level")
      ->check(CLI::Range(0.5, 0.9999));
  estimate->add_flag("--header", est.header, "Print a header line");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a bivariate process");
  simulate->add_option("-f,--family", sim.family, "Process family")->required();
  simulate->add_option("--rho", sim.rho, "Correlation parameter");
  simulate->add_option("--a", sim.a, "First coefficient");
  simulate->add_option("--b", sim.b, "Second coefficient");
  simulate->add_option("-n,--n", sim.n, "Length")->check(CLI::PositiveNumber);
  simulate->add_option("-s,--seed", sim.seed, "Seed");
  simulate->add_option("-o,--out", sim.out_path, "Output CSV")->required();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("-c,--config", exp.config, "Config file")->required();
  experiment->add_option("-o,--out", exp.out_path, "Report CSV")->required();
  experiment->add_option("--threads", exp.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  AnalyticArgs ana;
  auto* analytic = app.add_subcommand("analytic", "Evaluate a Gaussian closed form");
  analytic->add_option("formula", ana.formula, "opd1-gauss, ar1-opd1, shifted-ar1-opd1, orthant2")
      ->required()
      ->check(CLI::IsMember({"opd1-gauss", "ar1-opd1", "shifted-ar1-opd1", "orthant2"}));
  analytic->add_option("--rho", ana.rho, "Correlation");
  analytic->add_option("--a", ana.a, "First coefficient");
  analytic->add_option("--b", ana.b, "Second coefficient");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ORDPAT_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*estimate) return cmd_estimate(est, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*experiment) return cmd_experiment(exp, out);
    return cmd_analytic(ana, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitEstimator;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace ordpat::cli
