#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ordpat");
  std::ostringstream out, err;
  const int code = ordpat::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "ordpat_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST_CASE("analytic formulas") {
  CHECK(run({"analytic", "shifted-ar1-opd1", "--rho", "0.5"}).out == "-0.160861\n");
  CHECK(run({"analytic", "ar1-opd1", "--a", "0", "--b", "0"}).out == "0\n");
  CHECK(run({"analytic", "orthant2", "--rho", "0.5"}).out == "0.333333\n");
  CHECK(run({"analytic", "opd1-gauss", "--rho", "1"}).out == "1\n");
  CHECK(run({"analytic", "orthant2"}).code == 2);
  CHECK(run({"analytic", "ar1-opd1", "--a", "0.8", "--b", "0.8"}).code == 3);
  CHECK(run({"analytic", "nonsense"}).code == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"estimate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("estimate from identical columns") {
  const auto file = scratch() / "same.csv";
  std::string text = "x,y\n";
  const double values[] = {0.3, 1.2, -0.4, 2.2, 0.9, -1.1, 0.5, 1.7, -0.2, 0.1};
  for (double v : values) text += std::to_string(v) + "," + std::to_string(v) + "\n";
  write(file, text);
  const auto opd = run({"estimate", file.string(), "--method", "opd", "--h", "2"});
  CHECK(opd.code == 0);
  CHECK(opd.out == "opd,2,0,10,1,,,\n");
  const auto pearson = run({"estimate", file.string(), "--method", "pearson", "--h", "1"});
  CHECK(fields(pearson.out)[4] == "1");
  const auto kendall = run({"estimate", file.string(), "-m", "kendall", "--header"});
  CHECK(kendall.out.rfind("method,h,shift,n,value,variance,ci_low,ci_high\nkendall,1,0,10,1,", 0) == 0);
}

TEST_CASE("estimate input handling") {
  const auto dir = scratch();
  write(dir / "crlf.csv", "idx,y,x\r\n0,1,4\r\n1,3,2\r\n2,2,5\r\n3,5,1\r\n4,4,3\r\n");
  const auto ok = run({"estimate", (dir / "crlf.csv").string()});
  CHECK(ok.code == 0);
  CHECK(fields(ok.out)[3] == "5");

  write(dir / "bad.csv", "x,y\n1,2\n3,abc\n");
  const auto bad = run({"estimate", (dir / "bad.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);

  write(dir / "noheader.csv", "a,b\n1,2\n");
  CHECK(run({"estimate", (dir / "noheader.csv").string()}).code == 2);
  CHECK(run({"estimate", (dir / "missing.csv").string()}).code == 2);

  write(dir / "short.csv", "x,y\n1,2\n2,1\n");
  const auto s = run({"estimate", (dir / "short.csv").string(), "--h", "2"});
  CHECK(s.code == 3);
  CHECK(s.err.find("InsufficientData") != std::string::npos);

  write(dir / "mono.csv", "x,y\n1,1\n2,2\n3,3\n4,4\n");
  const auto m = run({"estimate", (dir / "mono.csv").string()});
  CHECK(m.code == 3);
  CHECK(m.err.find("DegenerateDenominator") != std::string::npos);
}

TEST_CASE("simulate and estimate round trip") {
  const auto dir = scratch();
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  const auto r = run({"simulate", "--family", "biv-ar1", "--a", "0.7", "--b", "-0.7", "--n", "500",
                      "--seed", "42", "--out", a.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "family=biv-ar1 a=0.7 b=-0.7 n=500 seed=42\n");
  run({"simulate", "--family", "biv-ar1", "--a", "0.7", "--b", "-0.7", "--n", "500", "--seed", "42",
       "--out", b.string()});
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(std::count(text.begin(), text.end(), '\n') == 501);
  CHECK(run({"estimate", a.string()}).out == run({"estimate", b.string()}).out);

  const auto sh = dir / "shift.csv";
  run({"simulate", "-f", "shifted-ar1", "--rho", "0.5", "-n", "500", "-s", "7", "-o", sh.string()});
  std::ifstream in(sh);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    const auto f = fields(line);
    rows.emplace_back(f[0], f[1]);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i].second == rows[i + 1].first);
  const auto est = run({"estimate", sh.string(), "--method", "opd"});
  const double v = std::stod(fields(est.out)[4]);
  CHECK(v > -0.30);
  CHECK(v < 0.0);

  const auto bl = dir / "block.csv";
  CHECK(run({"simulate", "-f", "block-multinormal", "--rho", "0.2", "-n", "10", "-o", bl.string()}).code == 0);
  CHECK(slurp(bl).rfind("x1,x2,x3,y1,y2,y3\n", 0) == 0);
  CHECK(run({"simulate", "-f", "block-multinormal", "--rho", "0.34", "-o", bl.string()}).code == 2);
  CHECK(run({"simulate", "-f", "biv-ar1", "--a", "0.7", "-o", bl.string()}).code == 2);
  CHECK(run({"simulate", "-f", "unknown", "--rho", "0.1", "-o", bl.string()}).code == 2);
}

TEST_CASE("experiment writes a report and metadata") {
  const auto dir = scratch();
  write(dir / "exp.cfg",
        "# small grid\nfamily = iid-ar1-pair\nparams = 0.1\nn = 60\nh = 1\nmethods = opd, kendall\n"
        "reps = 1\nseed = 5\n");
  const auto report = dir / "exp.csv";
  const auto r = run({"experiment", "--config", (dir / "exp.cfg").string(), "--out", report.string(),
                      "--threads", "2"});
  CHECK(r.code == 0);
  const auto text = slurp(report);
  CHECK(text.rfind("method,family,param,n,h,mean,sd,median,iqr,reps\n", 0) == 0);
  CHECK(text.find("opd,iid-ar1-pair,0.1,60,1,") != std::string::npos);
  CHECK(text.find(",0,") != std::string::npos);
  const auto meta = slurp(dir / "exp.csv.meta");
  CHECK(meta.find("rng=xoshiro256**") != std::string::npos);
  CHECK(meta.find("threads=2") != std::string::npos);
  CHECK(meta.find("version=") != std::string::npos);
  CHECK(meta.find("windows=overlapping") != std::string::npos);

  write(dir / "bad.cfg", "family = iid-ar1-pair\nparams = 0.1\nn = 60\nh = 1\nmethods = opd\n");
  const auto bad = run({"experiment", "-c", (dir / "bad.cfg").string(), "-o", report.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("'seed'") != std::string::npos);
}

TEST_CASE("seed environment override") {
  const auto dir = scratch();
  write(dir / "env.cfg",
        "family = iid-ar1-pair\nparams = 0.5\nn = 80\nh = 1\nmethods = opd\nreps = 3\nseed = 1\n");
  const auto cfg = (dir / "env.cfg").string();
  ::setenv("ORDPAT_SEED", "12345", 1);
  run({"experiment", "-c", cfg, "-o", (dir / "env1.csv").string()});
  ::unsetenv("ORDPAT_SEED");
  run({"experiment", "-c", cfg, "-o", (dir / "env2.csv").string()});
  write(dir / "env3.cfg",
        "family = iid-ar1-pair\nparams = 0.5\nn = 80\nh = 1\nmethods = opd\nreps = 3\nseed = 12345\n");
  run({"experiment", "-c", (dir / "env3.cfg").string(), "-o", (dir / "env3.csv").string()});
  CHECK(slurp(dir / "env1.csv") == slurp(dir / "env3.csv"));
  CHECK(slurp(dir / "env1.csv") != slurp(dir / "env2.csv"));
  CHECK(slurp(dir / "env1.csv.meta").find("seed=12345") != std::string::npos);
}
