#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mshom/bench.hpp"
#include "mshom/driver.hpp"

namespace mshom::cli {

enum class Subcommand { kRun, kSweep, kRiccati, kListProblems };

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// A fully resolved invocation.
struct RunSpec {
  Subcommand subcommand = Subcommand::kRun;
  std::string problem = "naive";
  /// Manifold orders to run; kCoupledOnly selects the coupled baseline.
  std::vector<int> k_list;
  DriverConfig config;
  std::optional<double> beta_hat;
  double reference_dt = 0.0;

  // problem = "custom": scalar linear system
  //   x' = a11 x + a12 y + b1,  eps y' = a21 x + a22 y + b2.
  std::vector<double> coeffs;
  double x0 = 1.0;
  double y0 = 0.0;

  SweepAxis axis = SweepAxis::kEpsilon;
  std::vector<double> grid;

  std::string output;  // empty: CSV goes to the output stream
  std::uint64_t seed = 0;
  int jobs = 1;

  // riccati subcommand
  std::string instance = "naive";
  int nx = 2;
  int ny = 2;

  /// Effective settings in a stable order, echoed before any output.
  std::vector<std::pair<std::string, std::string>> resolved;
};

struct ParseOutcome {
  int exit_code = kExitOk;
  /// False after --help or a parse error.
  bool proceed = true;
  RunSpec spec;
  std::string message;
};

/// Parses `args` (without the program name). Settings resolve as
/// flags > config file (--config, key=value lines) > benchmark defaults >
/// library defaults. `env_jobs` stands in for MSHOM_JOBS.
ParseOutcome parse(const std::vector<std::string>& args,
                   const std::optional<std::string>& env_jobs = std::nullopt);

/// Runs a parsed spec. CSV goes to spec.output or `out`; the resolved
/// settings and fit summaries go to `report`.
int execute(const RunSpec& spec, std::ostream& out, std::ostream& report);

/// parse + execute with MSHOM_JOBS taken from the environment.
int main_entry(int argc, char** argv);

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// "lo:hi:logN", "lo:hi:linN", a comma list, or a single number.
/// Throws ConfigError on malformed input.
std::vector<double> parse_grid(const std::string& text);

/// "0,1,2" or "coupled,0,1,2". Throws ConfigError.
std::vector<int> parse_k_list(const std::string& text);

/// Reads key=value lines; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

BenchmarkCase make_custom_case(const std::vector<double>& coeffs, double x0,
                               double y0);

inline constexpr const char* kRunCsvHeader =
    "problem,k,alg,diff,eps,dt,tau,M,alpha,Tc,error,micro_calls,wall_ms,"
    "status";
inline constexpr const char* kRiccatiCsvHeader =
    "eps,k,normC_err,d_err,residual";

}  // namespace mshom::cli
