#pragma once

#include <string>
#include <vector>

#include "mshom/manifold.hpp"
#include "mshom/steppers.hpp"
#include "mshom/system.hpp"

namespace mshom {

/// Two-stage simulation settings.
///
/// Stage one integrates the full stiff system at dt_coupled until the layer
/// exit test fires; stage two integrates dX/dt = f(X, Gamma_k(X)) at
/// dt_macro up to T.
struct DriverConfig {
  double epsilon = 1e-3;
  double T = 1.0;
  double dt_coupled = 1e-5;
  double dt_macro = 1e-2;
  /// The exit test is evaluated every n_p coupled steps.
  int n_p = 10;
  /// Manifold order used inside the exit test (independent of manifold.k).
  int criterion_order = 2;
  ManifoldConfig manifold;
  /// Seed each base-case relaxation from the previous manifold value
  /// advanced along its slope.
  bool warm_start = false;
  Scheme coupled_scheme = Scheme::kRK4;
  Scheme macro_scheme = Scheme::kRK4;
  /// Keep every n-th coupled state in the trajectory (the last one always).
  int record_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> x_states;
  std::vector<Vector> y_states;  // coupled stage only

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct CoupledStageResult {
  Vector x;
  Vector y;
  Trajectory trajectory;
  double T_c = 0.0;
  long N_c = 0;
  /// False when T was reached before the exit test fired.
  bool criterion_fired = false;
  long micro_calls = 0;
};

struct DecoupledStageResult {
  Trajectory trajectory;
  long micro_calls = 0;
};

struct SimulationResult {
  Trajectory coupled;
  Trajectory decoupled;
  double T_c = 0.0;
  long N_c = 0;
  Vector x_final;
  long micro_calls_total = 0;
  double wall_time = 0.0;  // seconds
  bool criterion_fired = false;
  std::vector<std::string> warnings;
};

/// Layer exit threshold mu = exp(-beta_hat * n_p * dt_coupled / (2 eps)).
double exit_ratio(double beta_hat, int n_p, double dt_coupled, double epsilon);

/// Advances the full system until, at some n that is a multiple of n_p with
/// n >= 2 n_p, |y_n - Gamma_k(x_n)| >= mu |y_{n-n_p} - Gamma_k(x_{n-n_p})|.
/// Stops at T (criterion_fired = false) if that never happens.
/// Throws NumericalFailure with the step index on NaN.
CoupledStageResult run_coupled_stage(const TwoScaleSystem& system,
                                     const Vector& x0, const Vector& y0,
                                     const DriverConfig& config);

/// Integrates the reduced slow system from t_start to T with the macro
/// scheme; the final step is shortened to land on T. `y_hint`, when given,
/// seeds the first warm-started relaxation.
DecoupledStageResult run_decoupled_stage(const TwoScaleSystem& system,
                                         const Vector& x_start,
                                         double t_start,
                                         const DriverConfig& config,
                                         const Vector& y_hint = Vector());

/// Coupled stage followed by the decoupled stage.
SimulationResult simulate(const TwoScaleSystem& system, const Vector& x0,
                          const Vector& y0, const DriverConfig& config);

/// Baseline: the coupled scheme over all of [0, T] at dt_coupled.
SimulationResult simulate_coupled_only(const TwoScaleSystem& system,
                                       const Vector& x0, const Vector& y0,
                                       const DriverConfig& config);

/// |y_t - Gamma_k(x_t)| for every sample of a trajectory with fast states.
std::vector<double> z_diagnostic(const TwoScaleSystem& system,
                                 const Trajectory& trajectory,
                                 const ManifoldConfig& manifold,
                                 double epsilon);

/// Full-system vector field on the stacked state (x, y).
VectorField coupled_field(const TwoScaleSystem& system, double epsilon);

}  // namespace mshom
