#include "mshom/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "mshom/errors.hpp"

namespace mshom {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

DriverConfig make_defaults(double epsilon, double T, double dt_coupled,
                           double dt_macro, Algorithm algorithm,
                           DiffScheme diff, double tau, int M, double alpha) {
  DriverConfig d;
  d.epsilon = epsilon;
  d.T = T;
  d.dt_coupled = dt_coupled;
  d.dt_macro = dt_macro;
  d.n_p = 10;
  d.criterion_order = 2;
  d.warm_start = true;
  d.manifold.k = 2;
  d.manifold.algorithm = algorithm;
  d.manifold.diff = diff;
  d.manifold.tau = tau;
  d.manifold.micro.M = M;
  d.manifold.micro.alpha = alpha;
  return d;
}

BenchmarkCase naive_case() {
  BenchmarkCase c;
  c.name = "naive";
  auto& s = c.system;
  s.name = c.name;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector&, const Vector& y) { return Vector(y); };
  s.g = [](const Vector& x, const Vector& y) { return Vector(x - y); };
  s.g_jac_y = [](const Vector&, const Vector&) { return mat1(-1.0); };
  s.g_jac_x = [](const Vector&, const Vector&) { return mat1(1.0); };
  s.beta_hat = 1.0;
  c.x0 = vec({1.0});
  c.y0 = vec({2.0});
  c.defaults = make_defaults(1e-5, 4.0, 1e-5, 5e-3, Algorithm::kType1,
                             DiffScheme::kForward, 1e-5, 1, 1.0);
  c.reference_dt = 1e-7;
  c.exact_solution = [x0 = c.x0[0], y0 = c.y0[0]](double t, double eps) {
    return vec({naive_exact(t, x0, y0, eps)});
  };
  return c;
}

BenchmarkCase enzyme_case() {
  constexpr double c_param = 0.5;
  BenchmarkCase c;
  c.name = "enzyme";
  auto& s = c.system;
  s.name = c.name;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector& y) {
    return vec({-x[0] + (x[0] + c_param) * y[0]});
  };
  s.g = [](const Vector& x, const Vector& y) {
    return vec({x[0] - (x[0] + 1.0) * y[0]});
  };
  s.g_jac_y = [](const Vector& x, const Vector&) {
    return mat1(-(x[0] + 1.0));
  };
  s.g_jac_x = [](const Vector&, const Vector& y) { return mat1(1.0 - y[0]); };
  s.beta_hat = 1.5;
  c.x0 = vec({1.0});
  c.y0 = vec({0.0});
  c.defaults = make_defaults(1e-2, 1.0, 1e-5, 1e-2, Algorithm::kType1,
                             DiffScheme::kCentral, 1e-6, 10, 0.5);
  c.reference_dt = 1e-6;
  return c;
}

BenchmarkCase forced_vdp_case() {
  constexpr double a = 2.0;
  constexpr double b = 1.0;
  BenchmarkCase c;
  c.name = "forced-vdp";
  auto& s = c.system;
  s.name = c.name;
  s.n_x = 2;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector& y) {
    return vec({-y[0] + a * std::sin(2.0 * std::numbers::pi * x[1]), b});
  };
  s.g = [](const Vector& x, const Vector& y) {
    return vec({y[0] + x[0] - y[0] * y[0] * y[0] / 3.0});
  };
  s.g_jac_y = [](const Vector&, const Vector& y) {
    return mat1(1.0 - y[0] * y[0]);
  };
  s.g_jac_x = [](const Vector&, const Vector&) {
    Matrix J(1, 2);
    J << 1.0, 0.0;
    return J;
  };
  s.beta_hat = 0.01;
  c.x0 = vec({3.0, 1.0});
  c.y0 = vec({1.0});
  c.defaults = make_defaults(1e-4, 1.0, 1e-5, 1e-2, Algorithm::kType2,
                             DiffScheme::kForward, 1e-6, 25, 0.1);
  c.reference_dt = 1e-5;
  return c;
}

BenchmarkCase chua_case() {
  constexpr double a = 0.7, b = 0.25, c1 = 7.0, c2 = 15.0, c3 = 20.0, d = 1.0;
  BenchmarkCase c;
  c.name = "chua";
  auto& s = c.system;
  s.name = c.name;
  s.n_x = 2;
  s.n_y = 1;
  s.f = [](const Vector& x, const Vector& y) {
    return vec({-d * x[1], -a * y[0] + x[0] + b * x[1]});
  };
  s.g = [](const Vector& x, const Vector& y) {
    const double v = y[0];
    return vec({x[1] - c3 * v * v * v - c2 * v * v - c1 * v});
  };
  s.g_jac_y = [](const Vector&, const Vector& y) {
    const double v = y[0];
    return mat1(-(3.0 * c3 * v * v + 2.0 * c2 * v + c1));
  };
  s.g_jac_x = [](const Vector&, const Vector&) {
    Matrix J(1, 2);
    J << 0.0, 1.0;
    return J;
  };
  s.beta_hat = 10.0;
  c.x0 = vec({1.0, 1.0});
  c.y0 = vec({1.0});
  c.defaults = make_defaults(1e-2, 1.0, 1e-6, 1e-2, Algorithm::kType2,
                             DiffScheme::kCentral, 1e-6, 10, 0.1);
  c.reference_dt = 1e-6;
  return c;
}

BenchmarkCase vdp_case() {
  BenchmarkCase c;
  c.name = "vdp";
  auto& s = c.system;
  s.name = c.name;
  s.n_x = 1;
  s.n_y = 1;
  s.f = [](const Vector&, const Vector& y) { return Vector(y); };
  s.g = [](const Vector& x, const Vector& y) {
    return vec({-((x[0] * x[0] - 1.0) * y[0] + x[0])});
  };
  s.g_jac_y = [](const Vector& x, const Vector&) {
    return mat1(-(x[0] * x[0] - 1.0));
  };
  s.g_jac_x = [](const Vector& x, const Vector& y) {
    return mat1(-(2.0 * x[0] * y[0] + 1.0));
  };
  s.beta_hat = 3.0;
  c.x0 = vec({4.0});
  c.y0 = vec({2.0});
  c.defaults = make_defaults(1e-3, 5.0, 1e-5, 2e-2, Algorithm::kType2,
                             DiffScheme::kForward, 1e-6, 20, 0.1);
  c.reference_dt = 1e-5;
  return c;
}

}  // namespace

std::vector<BenchmarkCase> registry() {
  return {naive_case(), enzyme_case(), forced_vdp_case(), chua_case(),
          vdp_case()};
}

BenchmarkCase find_case(const std::string& name) {
  for (auto& c : registry()) {
    if (c.name == name) return c;
  }
  throw ConfigError("unknown problem '" + name + "'");
}

double naive_exact(double t, double x0, double y0, double epsilon) {
  // Literal closed form. 1 - sqrt(1 + 4 eps) cancels for small eps, which
  // costs about 1e-9 absolute at eps = 1e-5, t = 4 (x is ~55 there).
  const double root = std::sqrt(1.0 + 4.0 * epsilon);
  const double lambda1 = -(1.0 + root) / (2.0 * epsilon);
  const double lambda2 = -(1.0 - root) / (2.0 * epsilon);
  const double gap = lambda1 - lambda2;
  return (-lambda2 * x0 + y0) / gap * std::exp(lambda1 * t) +
         (lambda1 * x0 - y0) / gap * std::exp(lambda2 * t);
}

Vector compute_reference(const BenchmarkCase& c, double epsilon,
                         double dt_fine) {
  DriverConfig cfg = c.defaults;
  cfg.epsilon = epsilon;
  cfg.dt_coupled = dt_fine;
  cfg.dt_macro = std::max(cfg.dt_macro, dt_fine);
  cfg.record_every = std::numeric_limits<int>::max();
  return simulate_coupled_only(c.system, c.x0, c.y0, cfg).x_final;
}

namespace {

using ReferenceKey = std::tuple<std::string, double, double, double>;

struct ReferenceCache {
  std::mutex mutex;
  std::map<ReferenceKey, std::shared_future<Vector>> entries;
};

ReferenceCache& reference_cache() {
  static ReferenceCache cache;
  return cache;
}

}  // namespace

Vector reference_solution(const BenchmarkCase& c, double epsilon,
                          double dt_fine) {
  ReferenceCache& cache = reference_cache();
  const ReferenceKey key{c.name, epsilon, dt_fine, c.defaults.T};
  std::promise<Vector> promise;
  std::shared_future<Vector> future;
  bool owner = false;
  {
    std::lock_guard lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it == cache.entries.end()) {
      future = promise.get_future().share();
      cache.entries.emplace(key, future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(compute_reference(c, epsilon, dt_fine));
    } catch (...) {
      {
        std::lock_guard lock(cache.mutex);
        cache.entries.erase(key);
      }
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

void clear_reference_cache() {
  ReferenceCache& cache = reference_cache();
  std::lock_guard lock(cache.mutex);
  cache.entries.clear();
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kEpsilon:
      return "eps";
    case SweepAxis::kDtMacro:
      return "dt";
    case SweepAxis::kTau:
      return "tau";
  }
  return "?";
}

LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) &&
        std::isfinite(y[i])) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  }
  LogLogFit fit;
  fit.points = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    fit.slope = fit.intercept = fit.r2 = std::nan("");
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

const LogLogFit* ConvergenceReport::fit_for(int k) const {
  for (const auto& [kk, fit] : fits) {
    if (kk == k) return &fit;
  }
  return nullptr;
}

LogLogFit ConvergenceReport::fit_window(int k, double lo, double hi) const {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.k == k && r.status == "ok" && r.axis_value >= lo &&
        r.axis_value <= hi) {
      xs.push_back(r.axis_value);
      ys.push_back(r.error);
    }
  }
  return fit_loglog(xs, ys);
}

std::string failure_status(const std::exception& e) {
  if (dynamic_cast<const NumericalFailure*>(&e)) return "nan-failure";
  if (dynamic_cast<const SingularityError*>(&e)) return "singular";
  if (dynamic_cast<const DivergenceError*>(&e)) return "diverged";
  if (dynamic_cast<const ConfigError*>(&e)) return "config-error";
  return "error";
}

ConvergenceReport run_sweep(const std::vector<int>& k_list,
                            const std::vector<double>& grid,
                            const CellFn& cell, int jobs) {
  std::vector<SweepRow> rows;
  for (int k : k_list) {
    for (double v : grid) {
      SweepRow r;
      r.k = k;
      r.axis_value = v;
      rows.push_back(r);
    }
  }

  auto evaluate = [&](SweepRow& r) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const CellOutcome out = cell(r.k, r.axis_value);
      r.error = out.error;
      r.micro_calls = out.micro_calls;
      r.T_c = out.T_c;
      r.status = std::isfinite(out.error) ? "ok" : "nan-failure";
    } catch (const std::exception& e) {
      r.error = std::nan("");
      r.status = failure_status(e);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  };

  const int workers =
      std::max(1, std::min(jobs, static_cast<int>(rows.size())));
  if (workers == 1) {
    for (auto& r : rows) evaluate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
          evaluate(rows[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return std::tie(a.k, a.axis_value) <
                            std::tie(b.k, b.axis_value);
                   });

  ConvergenceReport report;
  report.rows = std::move(rows);
  for (int k : k_list) {
    if (report.fit_for(k)) continue;
    report.fits.emplace_back(
        k, report.fit_window(k, -std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()));
  }
  return report;
}

ConvergenceReport convergence_sweep(const BenchmarkCase& c,
                                    const std::vector<int>& k_list,
                                    SweepAxis axis,
                                    const std::vector<double>& grid,
                                    const DriverConfig& base,
                                    const SweepOptions& options) {
  if (grid.size() < 3) {
    throw ConfigError("convergence_sweep: grid needs at least 3 points");
  }
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (!(*lo > 0.0) || *hi / *lo < 10.0 * (1.0 - 1e-12)) {
    throw ConfigError("convergence_sweep: grid must span at least a decade");
  }
  const double ref_dt = options.reference_dt.value_or(c.reference_dt);
  BenchmarkCase ref_case = c;
  ref_case.defaults.T = base.T;

  auto cell = [&](int k, double value) -> CellOutcome {
    DriverConfig cfg = base;
    switch (axis) {
      case SweepAxis::kEpsilon:
        cfg.epsilon = value;
        break;
      case SweepAxis::kDtMacro:
        cfg.dt_macro = value;
        break;
      case SweepAxis::kTau:
        cfg.manifold.tau = value;
        break;
    }
    cfg.record_every = std::numeric_limits<int>::max();
    SimulationResult sim;
    if (k == kCoupledOnly) {
      sim = simulate_coupled_only(c.system, c.x0, c.y0, cfg);
    } else {
      cfg.manifold.k = k;
      sim = simulate(c.system, c.x0, c.y0, cfg);
    }
    const Vector ref = options.prefer_exact && c.exact_solution
                           ? c.exact_solution(cfg.T, cfg.epsilon)
                           : reference_solution(ref_case, cfg.epsilon, ref_dt);
    return {(sim.x_final - ref).norm(), sim.micro_calls_total, sim.T_c};
  };
  return run_sweep(k_list, grid, cell, options.jobs);
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace mshom
