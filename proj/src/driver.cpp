#include "mshom/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "mshom/errors.hpp"

namespace mshom {

void DriverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("driver: epsilon must be > 0");
  if (!(dt_coupled > 0.0)) throw ConfigError("driver: dt_coupled must be > 0");
  if (!(dt_coupled <= dt_macro)) {
    throw ConfigError("driver: dt_coupled must not exceed dt_macro");
  }
  if (!(dt_macro <= T)) throw ConfigError("driver: dt_macro must not exceed T");
  if (n_p < 1) throw ConfigError("driver: n_p must be >= 1");
  if (criterion_order < 0) throw ConfigError("driver: criterion_order < 0");
  if (record_every < 1) throw ConfigError("driver: record_every must be >= 1");
  manifold.validate();
}

double exit_ratio(double beta_hat, int n_p, double dt_coupled,
                  double epsilon) {
  return std::exp(-beta_hat * n_p * dt_coupled / (2.0 * epsilon));
}

VectorField coupled_field(const TwoScaleSystem& system, double epsilon) {
  const int nx = system.n_x;
  const int ny = system.n_y;
  const double inv_eps = 1.0 / epsilon;
  return {nx + ny, [&system, nx, ny, inv_eps](const Vector& z) -> Vector {
            const Vector x = z.head(nx);
            const Vector y = z.tail(ny);
            Vector dz(nx + ny);
            dz.head(nx) = system.f(x, y);
            dz.tail(ny) = inv_eps * system.g(x, y);
            return dz;
          }};
}

namespace {

// Number of steps of size dt needed to cover `span`, tolerating round-off in
// span / dt.
long step_count(double span, double dt) {
  if (span <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
}

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

CoupledStageResult run_coupled_stage(const TwoScaleSystem& system,
                                     const Vector& x0, const Vector& y0,
                                     const DriverConfig& config) {
  config.validate();
  const int nx = system.n_x;
  const int ny = system.n_y;
  if (x0.size() != nx || y0.size() != ny) {
    throw ConfigError("run_coupled_stage: initial state has wrong size");
  }

  ManifoldConfig criterion = config.manifold;
  criterion.k = config.criterion_order;
  ManifoldApproximator manifold(system, config.epsilon, criterion);

  const VectorField field = coupled_field(system, config.epsilon);
  const double mu = exit_ratio(system.beta_hat, config.n_p, config.dt_coupled,
                               config.epsilon);
  const long n_max = step_count(config.T, config.dt_coupled);

  CoupledStageResult out;
  Vector z(nx + ny);
  z << x0, y0;
  auto record = [&](double t) {
    out.trajectory.times.push_back(t);
    out.trajectory.x_states.push_back(z.head(nx));
    out.trajectory.y_states.push_back(z.tail(ny));
  };
  record(0.0);

  std::optional<double> previous_distance;
  // Warm start for the exit test: the previous manifold value. The raw fast
  // state is a poor seed while the layer is still decaying.
  std::optional<Vector> last_gamma;
  long n = 0;
  double t = 0.0;
  while (n < n_max) {
    const double t_next =
        std::min(static_cast<double>(n + 1) * config.dt_coupled, config.T);
    try {
      z = step(config.coupled_scheme, field, z, t_next - t);
    } catch (const NumericalFailure&) {
      throw NumericalFailure("coupled stage: non-finite state at step " +
                             std::to_string(n + 1));
    }
    ++n;
    t = t_next;

    bool fire = false;
    if (n % config.n_p == 0) {
      const Vector x = z.head(nx);
      const Vector y = z.tail(ny);
      if (config.warm_start && last_gamma) manifold.seed(*last_gamma);
      Vector gamma = manifold.evaluate(x).value;
      const double distance = (y - gamma).norm();
      last_gamma = std::move(gamma);
      if (n >= 2L * config.n_p && previous_distance &&
          distance >= mu * *previous_distance) {
        fire = true;
      }
      previous_distance = distance;
    }
    if (fire || n == n_max || n % config.record_every == 0) record(t);
    if (fire) {
      out.criterion_fired = true;
      break;
    }
  }

  out.N_c = n;
  out.T_c = out.criterion_fired ? static_cast<double>(n) * config.dt_coupled
                                : t;
  out.x = z.head(nx);
  out.y = z.tail(ny);
  out.micro_calls = manifold.micro_calls();
  return out;
}

DecoupledStageResult run_decoupled_stage(const TwoScaleSystem& system,
                                         const Vector& x_start,
                                         double t_start,
                                         const DriverConfig& config,
                                         const Vector& y_hint) {
  config.validate();
  if (x_start.size() != system.n_x) {
    throw ConfigError("run_decoupled_stage: start state has wrong size");
  }
  ManifoldApproximator manifold(system, config.epsilon, config.manifold);

  // Warm-start state: the last manifold value, its slope and its time.
  Vector last_value = y_hint;
  Vector last_slope;
  double last_time = t_start;
  const bool warm = config.warm_start;

  auto reduced = [&](double t_stage, const Vector& X) -> Vector {
    if (warm && last_value.size() == system.n_y) {
      Vector guess = last_value;
      if (last_slope.size() == system.n_y) {
        guess += (t_stage - last_time) * last_slope;
      }
      manifold.seed(std::move(guess));
    }
    ManifoldEval e = manifold.evaluate(X);
    Vector dX = system.f(X, e.value);
    if (warm) {
      last_value = std::move(e.value);
      last_slope = e.slope ? std::move(*e.slope) : Vector();
      last_time = t_stage;
    }
    return dX;
  };

  DecoupledStageResult out;
  Trajectory& traj = out.trajectory;
  Vector X = x_start;
  traj.times.push_back(t_start);
  traj.x_states.push_back(X);

  const long n_steps = step_count(config.T - t_start, config.dt_macro);
  double t = t_start;
  for (long i = 1; i <= n_steps; ++i) {
    const double t_next =
        i == n_steps ? config.T
                     : t_start + static_cast<double>(i) * config.dt_macro;
    const double h = t_next - t;
    try {
      if (config.macro_scheme == Scheme::kRK4) {
        const Vector k1 = reduced(t, X);
        const Vector k2 = reduced(t + 0.5 * h, X + (0.5 * h) * k1);
        const Vector k3 = reduced(t + 0.5 * h, X + (0.5 * h) * k2);
        const Vector k4 = reduced(t + h, X + h * k3);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        X += h * reduced(t, X);
      }
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string("decoupled stage at t=") +
                             at_time(t) + ": " + e.what());
    }
    if (!X.allFinite()) {
      throw NumericalFailure("decoupled stage: non-finite state at t=" +
                             at_time(t_next));
    }
    t = t_next;
    traj.times.push_back(t);
    traj.x_states.push_back(X);
  }
  out.micro_calls = manifold.micro_calls();
  return out;
}

SimulationResult simulate(const TwoScaleSystem& system, const Vector& x0,
                          const Vector& y0, const DriverConfig& config) {
  system.validate();
  const auto start = std::chrono::steady_clock::now();
  SimulationResult result;
  if (!relaxation_stable(config.manifold.micro, system.beta_hat)) {
    result.warnings.push_back(
        "alpha * beta_hat >= 2: forward-Euler relaxation may not contract");
  }

  CoupledStageResult coupled = run_coupled_stage(system, x0, y0, config);
  result.T_c = coupled.T_c;
  result.N_c = coupled.N_c;
  result.criterion_fired = coupled.criterion_fired;
  result.micro_calls_total = coupled.micro_calls;
  if (!coupled.criterion_fired) {
    result.warnings.push_back(
        "layer exit test never fired; coupled stage ran to T");
  }

  if (coupled.T_c < config.T) {
    DecoupledStageResult decoupled = run_decoupled_stage(
        system, coupled.x, coupled.T_c, config, coupled.y);
    result.micro_calls_total += decoupled.micro_calls;
    result.x_final = decoupled.trajectory.x_states.back();
    result.decoupled = std::move(decoupled.trajectory);
  } else {
    result.x_final = coupled.x;
  }
  result.coupled = std::move(coupled.trajectory);
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

SimulationResult simulate_coupled_only(const TwoScaleSystem& system,
                                       const Vector& x0, const Vector& y0,
                                       const DriverConfig& config) {
  system.validate();
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int nx = system.n_x;
  const int ny = system.n_y;
  const VectorField field = coupled_field(system, config.epsilon);

  SimulationResult result;
  Trajectory& traj = result.coupled;
  Vector z(nx + ny);
  z << x0, y0;
  traj.times.push_back(0.0);
  traj.x_states.push_back(x0);
  traj.y_states.push_back(y0);

  const long n_max = step_count(config.T, config.dt_coupled);
  double t = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    const double t_next =
        n == n_max ? config.T : static_cast<double>(n) * config.dt_coupled;
    try {
      z = step(config.coupled_scheme, field, z, t_next - t);
    } catch (const NumericalFailure&) {
      throw NumericalFailure("coupled solver: non-finite state at step " +
                             std::to_string(n));
    }
    t = t_next;
    if (n == n_max || n % config.record_every == 0) {
      traj.times.push_back(t);
      traj.x_states.push_back(z.head(nx));
      traj.y_states.push_back(z.tail(ny));
    }
  }
  result.N_c = n_max;
  result.T_c = t;
  result.x_final = z.head(nx);
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

std::vector<double> z_diagnostic(const TwoScaleSystem& system,
                                 const Trajectory& trajectory,
                                 const ManifoldConfig& manifold,
                                 double epsilon) {
  std::vector<double> z;
  z.reserve(trajectory.size());
  const std::size_t n =
      std::min(trajectory.x_states.size(), trajectory.y_states.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ManifoldEval e =
        evaluate_manifold(system, trajectory.x_states[i], epsilon, manifold);
    z.push_back((trajectory.y_states[i] - e.value).norm());
  }
  return z;
}

}  // namespace mshom
