#include <gtest/gtest.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mshom/cli.hpp"
#include "mshom/errors.hpp"

namespace mshom::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

struct Run {
  int code = 0;
  std::string csv;
  std::string report;
};

Run run(const std::vector<std::string>& args) {
  auto parsed = parse(args);
  Run r;
  if (!parsed.proceed) {
    r.code = parsed.exit_code;
    r.report = parsed.message;
    return r;
  }
  std::ostringstream out, rep;
  r.code = execute(parsed.spec, out, rep);
  r.csv = out.str();
  r.report = rep.str();
  return r;
}

// CSV data lines (header and '#' lines removed), split into fields.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(csv);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    out.push_back(split(line, ','));
  }
  return out;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("mshom_cli_test_" + name);
}

TEST(Parse, RunMergesDefaults) {
  auto p = parse({"run", "--problem", "naive", "--k", "2"});
  ASSERT_TRUE(p.proceed) << p.message;
  EXPECT_EQ(p.spec.subcommand, Subcommand::kRun);
  EXPECT_EQ(p.spec.k_list, std::vector<int>{2});
  EXPECT_EQ(p.spec.config.epsilon, 1e-5);
  EXPECT_EQ(p.spec.config.T, 4.0);
  EXPECT_EQ(p.spec.config.manifold.micro.M, 1);
  EXPECT_FALSE(p.spec.resolved.empty());
}

TEST(Parse, SweepSpec) {
  auto p = parse({"sweep", "--problem", "enzyme", "--k", "0,1,2", "--eps",
                  "1e-4:1e-2:log8"});
  ASSERT_TRUE(p.proceed) << p.message;
  EXPECT_EQ(p.spec.axis, SweepAxis::kEpsilon);
  EXPECT_EQ(p.spec.k_list.size() * p.spec.grid.size(), 24u);
  EXPECT_EQ(p.spec.grid.front(), 1e-4);
  EXPECT_EQ(p.spec.grid.back(), 1e-2);
}

TEST(Parse, Rejections) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"run", "--problem", "nosuch"},
           {"sweep", "--problem", "enzyme", "--eps", ""},
           {"run", "--problem", "naive", "--M", "ten"},
           {"run", "--problem", "naive", "--dt", "1", "--dt-c", "2"},
           {"sweep", "--problem", "enzyme", "--k", "0"},
           {"run", "--bogus", "1"}}) {
    auto p = parse(args);
    EXPECT_FALSE(p.proceed) << args[1];
    EXPECT_EQ(p.exit_code, kExitUsage) << args[1];
  }
  auto p = parse({"run", "--problem", "naive", "--M", "ten"});
  EXPECT_NE(p.message.find("M"), std::string::npos) << p.message;
}

TEST(Parse, ConfigFilePrecedence) {
  const auto path = temp_file("precedence.cfg");
  {
    std::ofstream f(path);
    f << "# experiment\nproblem = enzyme\neps = 1e-3\nM = 7\n";
  }
  auto p = parse({"run", "--config", path.string(), "--eps", "2e-3"});
  ASSERT_TRUE(p.proceed) << p.message;
  EXPECT_EQ(p.spec.problem, "enzyme");
  EXPECT_EQ(p.spec.config.epsilon, 2e-3);          // flag
  EXPECT_EQ(p.spec.config.manifold.micro.M, 7);    // file
  EXPECT_EQ(p.spec.config.manifold.micro.alpha, 0.5);  // case default
  fs::remove(path);
}

TEST(Parse, UnknownConfigKey) {
  const auto path = temp_file("unknown.cfg");
  {
    std::ofstream f(path);
    f << "problem = naive\nfrobnicate = 3\n";
  }
  auto p = parse({"run", "--config", path.string()});
  EXPECT_EQ(p.exit_code, kExitUsage);
  EXPECT_NE(p.message.find("frobnicate"), std::string::npos) << p.message;
  fs::remove(path);
}

TEST(Parse, JobsFromEnvironment) {
  auto p = parse({"sweep", "--problem", "enzyme", "--eps", "1e-4:1e-2:log3"},
                 "3");
  ASSERT_TRUE(p.proceed);
  EXPECT_EQ(p.spec.jobs, 3);
  p = parse({"sweep", "--problem", "enzyme", "--eps", "1e-4:1e-2:log3",
             "--jobs", "2"},
            "3");
  EXPECT_EQ(p.spec.jobs, 2);
}

TEST(Grid, Forms) {
  EXPECT_EQ(parse_grid("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(parse_grid("1e-3,1e-2,1"), (std::vector<double>{1e-3, 1e-2, 1}));
  auto lin = parse_grid("0:1:lin5");
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[2], 0.5);
  auto log = parse_grid("1e-4:1e-1:log4");
  ASSERT_EQ(log.size(), 4u);
  EXPECT_NEAR(log[1], 1e-3, 1e-18);
  EXPECT_THROW(parse_grid("1:2:cubic3"), ConfigError);
  EXPECT_THROW(parse_grid("0:1:log3"), ConfigError);
  EXPECT_EQ(parse_k_list("coupled,0,2"),
            (std::vector<int>{kCoupledOnly, 0, 2}));
  EXPECT_THROW(parse_k_list("1,x"), ConfigError);
}

TEST(Format, ShortestRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? 1 : -1);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Execute, TableOneRows) {
  auto r = run({"run", "--problem", "naive", "--k", "coupled,0,1,2"});
  ASSERT_EQ(r.code, kExitOk) << r.report;
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), kRunCsvHeader);
  auto body = rows(r.csv);
  ASSERT_EQ(body.size(), 4u);
  EXPECT_EQ(body[0][1], "coupled");
  for (const auto& row : body) {
    EXPECT_EQ(row.size(), 14u);
    EXPECT_EQ(row.back(), "ok");
  }
  EXPECT_NE(r.report.find("# problem = naive"), std::string::npos);
}

TEST(Execute, CsvRoundTripsConfiguredValues) {
  auto r = run({"run", "--problem", "enzyme", "--k", "1", "--eps", "0.0037",
                "--tau", "3.3e-7", "--dt", "0.02"});
  ASSERT_EQ(r.code, kExitOk) << r.report;
  auto body = rows(r.csv);
  ASSERT_EQ(body.size(), 1u);
  auto num = [](const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    EXPECT_EQ(res.ec, std::errc()) << s;
    EXPECT_EQ(res.ptr, s.data() + s.size()) << s;
    return v;
  };
  EXPECT_EQ(num(body[0][4]), 0.0037);
  EXPECT_EQ(num(body[0][5]), 0.02);
  EXPECT_EQ(num(body[0][6]), 3.3e-7);
  EXPECT_EQ(num(body[0][8]), 0.5);
  for (int col : {9, 10, 11, 12}) num(body[0][col]);
}

TEST(Execute, SweepWithFailingCell) {
  auto r = run({"sweep", "--problem", "custom", "--coeffs=-100,0,0,-1",
                "--eps", "1e-3", "--T", "50", "--dt-c", "1e-4", "--ref-dt",
                "1e-4", "--k", "0", "--dt", "1e-3,1e-2,1"});
  EXPECT_EQ(r.code, kExitOk) << r.report;
  auto body = rows(r.csv);
  ASSERT_EQ(body.size(), 3u);
  EXPECT_EQ(body[0].back(), "ok");
  EXPECT_EQ(body[2].back(), "nan-failure");
}

TEST(Execute, NumericalFailureInRunExitsThree) {
  auto r = run({"run", "--problem", "custom", "--coeffs=-100,0,0,-1", "--eps",
                "1e-3", "--T", "50", "--dt-c", "1e-4", "--dt", "1", "--k",
                "0"});
  EXPECT_EQ(r.code, kExitNumerical);
}

TEST(Execute, UnwritableOutput) {
  auto r = run({"run", "--problem", "naive", "--k", "0", "--out",
                "/nonexistent-dir/out.csv"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(Execute, WritesOutputFile) {
  const auto path = temp_file("out.csv");
  auto r = run({"run", "--problem", "naive", "--k", "0", "--out",
                path.string()});
  ASSERT_EQ(r.code, kExitOk);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, kRunCsvHeader);
  fs::remove(path);
}

TEST(Execute, DeterministicApartFromWallTime) {
  const std::vector<std::string> args = {
      "sweep", "--problem", "enzyme", "--k", "0,2", "--eps", "1e-3:1e-2:log3",
      "--jobs", "3"};
  auto a = rows(run(args).csv);
  auto b = rows(run(args).csv);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i][12] = b[i][12] = "";
    EXPECT_EQ(a[i], b[i]);
  }
}

TEST(Execute, Riccati) {
  auto r = run({"riccati", "--instance", "random", "--seed", "7", "--eps",
                "1e-4:1e-2:log3", "--k", "0,1"});
  ASSERT_EQ(r.code, kExitOk) << r.report;
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), kRiccatiCsvHeader);
  auto body = rows(r.csv);
  ASSERT_EQ(body.size(), 6u);
  for (const auto& row : body) EXPECT_LT(std::stod(row[4]), 1e-12);
}

TEST(Execute, ListProblems) {
  auto r = run({"list-problems"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* name : {"naive", "enzyme", "forced-vdp", "chua", "vdp"}) {
    EXPECT_NE(r.csv.find(name), std::string::npos) << name;
  }
}

TEST(Binary, ExitCodes) {
  const std::string bin = MSHOM_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw =
        std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("run --problem nosuch"), 2);
  EXPECT_EQ(status("run --problem naive --k 0"), 0);
  EXPECT_EQ(status("--help"), 0);
}

}  // namespace
}  // namespace mshom::cli
