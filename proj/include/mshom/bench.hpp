#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mshom/driver.hpp"
#include "mshom/system.hpp"

namespace mshom {

/// One benchmark problem with its standard parameters.
struct BenchmarkCase {
  std::string name;
  TwoScaleSystem system;
  Vector x0;
  Vector y0;
  /// Default run configuration (T, eps, step sizes, manifold settings).
  DriverConfig defaults;
  /// Step of the fully coupled reference run.
  double reference_dt = 1e-6;
  /// Closed-form slow solution x(t; eps), when known.
  std::function<Vector(double t, double epsilon)> exact_solution;
};

/// naive, enzyme, forced-vdp, chua, vdp.
std::vector<BenchmarkCase> registry();

/// Looks a case up by name; throws ConfigError if absent.
BenchmarkCase find_case(const std::string& name);

/// Closed form of the naive linear problem x' = y, eps y' = x - y.
double naive_exact(double t, double x0, double y0, double epsilon);

/// Slow state at T from the fully coupled RK4 solver at dt_fine. Results are
/// memoised per (case, eps, dt_fine) in a process-wide cache.
Vector reference_solution(const BenchmarkCase& c, double epsilon,
                          double dt_fine);

/// Uncached variant of reference_solution.
Vector compute_reference(const BenchmarkCase& c, double epsilon,
                         double dt_fine);

void clear_reference_cache();

enum class SweepAxis { kEpsilon, kDtMacro, kTau };
std::string_view to_string(SweepAxis axis);

/// k value that selects the coupled-only baseline.
inline constexpr int kCoupledOnly = -1;

struct SweepRow {
  int k = 0;
  double axis_value = 0.0;
  double error = 0.0;
  long micro_calls = 0;
  double wall_ms = 0.0;
  double T_c = 0.0;
  std::string status = "ok";
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares line through (log10 x, log10 y). Non-positive or non-finite
/// pairs are skipped. Slope is NaN with fewer than two usable points.
LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y);

struct ConvergenceReport {
  std::vector<SweepRow> rows;  // sorted by (k, axis_value)
  std::vector<std::pair<int, LogLogFit>> fits;

  const LogLogFit* fit_for(int k) const;
  /// Fit over the successful rows of k whose axis value lies in [lo, hi].
  LogLogFit fit_window(int k, double lo, double hi) const;
};

struct CellOutcome {
  double error = 0.0;
  long micro_calls = 0;
  double T_c = 0.0;
};

using CellFn = std::function<CellOutcome(int k, double axis_value)>;

/// Evaluates every (k, grid value) cell with up to `jobs` workers. A cell
/// that throws is recorded with a failure status and the sweep continues.
ConvergenceReport run_sweep(const std::vector<int>& k_list,
                            const std::vector<double>& grid,
                            const CellFn& cell, int jobs = 1);

struct SweepOptions {
  int jobs = 1;
  /// Reference step; defaults to the case's reference_dt.
  std::optional<double> reference_dt;
  /// Use the closed-form solution as reference when the case has one.
  bool prefer_exact = true;
};

/// Runs simulate (or the coupled baseline for kCoupledOnly) for each k and
/// grid point with `base` as the fixed configuration, and reports the
/// Euclidean error of the slow state at T against the reference.
/// Throws ConfigError unless the grid has >= 3 points spanning a decade.
ConvergenceReport convergence_sweep(const BenchmarkCase& c,
                                    const std::vector<int>& k_list,
                                    SweepAxis axis,
                                    const std::vector<double>& grid,
                                    const DriverConfig& base,
                                    const SweepOptions& options = {});

/// Status string for an exception thrown by a cell.
std::string failure_status(const std::exception& e);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace mshom
