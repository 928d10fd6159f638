#include "mshom/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mshom/errors.hpp"
#include "mshom/riccati.hpp"

namespace mshom::cli {

namespace {

// Every setting accepted as --flag or as a config-file key.
constexpr std::array<const char*, 26> kKeys = {
    "problem", "k",     "eps",   "T",           "dt",    "dt-c",
    "tau",     "M",     "alpha", "np",          "criterion-order",
    "alg",     "diff",  "warm-start",           "ref-dt", "beta-hat",
    "out",     "jobs",  "seed",  "instance",    "nx",    "ny",
    "coeffs",  "x0",    "y0",    "record-every"};

bool is_known_key(const std::string& key) {
  for (const char* k : kKeys) {
    if (key == k) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return v;
}

long to_long(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

bool is_grid(const std::string& text) {
  return text.find(':') != std::string::npos ||
         text.find(',') != std::string::npos;
}

std::string k_label(int k) {
  return k == kCoupledOnly ? "coupled" : std::to_string(k);
}

std::string join_k(const std::vector<int>& ks) {
  std::string s;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) s += ',';
    s += k_label(ks[i]);
  }
  return s;
}

std::string join_grid(const std::vector<double>& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ',';
    s += format_double(g[i]);
  }
  return s;
}

Subcommand subcommand_from(const std::string& name) {
  if (name == "run") return Subcommand::kRun;
  if (name == "sweep") return Subcommand::kSweep;
  if (name == "riccati") return Subcommand::kRiccati;
  return Subcommand::kListProblems;
}

// Applies merged settings on top of the problem defaults.
void resolve(RunSpec& spec, const std::map<std::string, std::string>& kv,
             const std::optional<std::string>& env_jobs) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("problem")) spec.problem = trim(*v);
  if (auto v = get("coeffs")) {
    for (const auto& c : split(*v, ',')) {
      spec.coeffs.push_back(to_double("coeffs", c));
    }
  }
  if (auto v = get("x0")) spec.x0 = to_double("x0", *v);
  if (auto v = get("y0")) spec.y0 = to_double("y0", *v);

  if (spec.subcommand != Subcommand::kRiccati) {
    BenchmarkCase c;
    if (spec.problem == "custom") {
      c = make_custom_case(spec.coeffs, spec.x0, spec.y0);
    } else {
      c = find_case(spec.problem);  // rejects unknown names
    }
    spec.config = c.defaults;
    spec.reference_dt = c.reference_dt;
  }

  DriverConfig& cfg = spec.config;
  const std::string* axis_text = nullptr;
  int grid_axes = 0;
  auto scalar_or_axis = [&](const char* key, SweepAxis axis,
                            double& target) {
    const std::string* v = get(key);
    if (!v) return;
    if (spec.subcommand == Subcommand::kSweep && is_grid(*v)) {
      ++grid_axes;
      spec.axis = axis;
      axis_text = v;
      return;
    }
    target = to_double(key, *v);
  };
  if (spec.subcommand != Subcommand::kRiccati) {
    scalar_or_axis("eps", SweepAxis::kEpsilon, cfg.epsilon);
    scalar_or_axis("dt", SweepAxis::kDtMacro, cfg.dt_macro);
    scalar_or_axis("tau", SweepAxis::kTau, cfg.manifold.tau);
  }

  if (auto v = get("T")) cfg.T = to_double("T", *v);
  if (auto v = get("dt-c")) cfg.dt_coupled = to_double("dt-c", *v);
  if (auto v = get("M")) cfg.manifold.micro.M = static_cast<int>(to_long("M", *v));
  if (auto v = get("alpha")) cfg.manifold.micro.alpha = to_double("alpha", *v);
  if (auto v = get("np")) cfg.n_p = static_cast<int>(to_long("np", *v));
  if (auto v = get("criterion-order")) {
    cfg.criterion_order = static_cast<int>(to_long("criterion-order", *v));
  }
  if (auto v = get("alg")) cfg.manifold.algorithm = parse_algorithm(trim(*v));
  if (auto v = get("diff")) cfg.manifold.diff = parse_diff_scheme(trim(*v));
  if (auto v = get("warm-start")) cfg.warm_start = to_bool("warm-start", *v);
  if (auto v = get("record-every")) {
    cfg.record_every = static_cast<int>(to_long("record-every", *v));
  }
  if (auto v = get("ref-dt")) spec.reference_dt = to_double("ref-dt", *v);
  if (auto v = get("beta-hat")) spec.beta_hat = to_double("beta-hat", *v);
  if (auto v = get("out")) spec.output = trim(*v);
  if (auto v = get("seed")) {
    spec.seed = static_cast<std::uint64_t>(to_long("seed", *v));
  }
  if (auto v = get("instance")) spec.instance = trim(*v);
  if (auto v = get("nx")) spec.nx = static_cast<int>(to_long("nx", *v));
  if (auto v = get("ny")) spec.ny = static_cast<int>(to_long("ny", *v));

  if (auto v = get("jobs")) {
    spec.jobs = static_cast<int>(to_long("jobs", *v));
  } else if (env_jobs && !env_jobs->empty()) {
    spec.jobs = static_cast<int>(to_long("MSHOM_JOBS", *env_jobs));
  }
  if (spec.jobs < 1) throw ConfigError("'jobs' must be >= 1");

  switch (spec.subcommand) {
    case Subcommand::kRun:
      spec.k_list = get("k") ? parse_k_list(*get("k"))
                             : std::vector<int>{cfg.manifold.k};
      break;
    case Subcommand::kSweep:
      spec.k_list = parse_k_list(get("k") ? *get("k") : "0,1,2");
      if (grid_axes != 1) {
        throw ConfigError(
            "sweep needs exactly one grid among 'eps', 'dt', 'tau'");
      }
      spec.grid = parse_grid(*axis_text);
      if (spec.grid.empty()) throw ConfigError("sweep grid is empty");
      break;
    case Subcommand::kRiccati: {
      spec.k_list = parse_k_list(get("k") ? *get("k") : "0,1,2,3");
      for (int k : spec.k_list) {
        if (k < 0) throw ConfigError("'k' must be a list of orders");
      }
      spec.grid = parse_grid(get("eps") ? *get("eps") : "1e-4:1e-2:log5");
      if (spec.grid.empty()) throw ConfigError("riccati eps grid is empty");
      if (spec.instance != "naive" && spec.instance != "random") {
        throw ConfigError("unknown riccati instance '" + spec.instance + "'");
      }
      break;
    }
    case Subcommand::kListProblems:
      break;
  }
  if (spec.subcommand == Subcommand::kRun ||
      spec.subcommand == Subcommand::kSweep) {
    if (spec.k_list.empty()) throw ConfigError("'k' is empty");
    if (spec.subcommand == Subcommand::kSweep) {
      // Validate with a representative grid value substituted.
      DriverConfig probe = cfg;
      for (double g : spec.grid) {
        if (spec.axis == SweepAxis::kEpsilon) probe.epsilon = g;
        if (spec.axis == SweepAxis::kDtMacro) probe.dt_macro = g;
        if (spec.axis == SweepAxis::kTau) probe.manifold.tau = g;
        probe.validate();
      }
    } else {
      cfg.validate();
    }
    if (spec.beta_hat && !(*spec.beta_hat > 0.0)) {
      throw ConfigError("'beta-hat' must be positive");
    }
  }

  auto& r = spec.resolved;
  r.clear();
  auto add = [&](std::string key, std::string value) {
    r.emplace_back(std::move(key), std::move(value));
  };
  const char* sub[] = {"run", "sweep", "riccati", "list-problems"};
  add("subcommand", sub[static_cast<int>(spec.subcommand)]);
  if (spec.subcommand == Subcommand::kRiccati) {
    add("instance", spec.instance);
    if (spec.instance == "random") {
      add("nx", std::to_string(spec.nx));
      add("ny", std::to_string(spec.ny));
      add("seed", std::to_string(spec.seed));
    }
    add("eps", join_grid(spec.grid));
    add("k", join_k(spec.k_list));
    return;
  }
  if (spec.subcommand == Subcommand::kListProblems) return;
  add("problem", spec.problem);
  if (spec.problem == "custom") {
    add("coeffs", join_grid(spec.coeffs));
    add("x0", format_double(spec.x0));
    add("y0", format_double(spec.y0));
  }
  add("k", join_k(spec.k_list));
  auto axis_or = [&](SweepAxis a, double v) {
    return spec.subcommand == Subcommand::kSweep && spec.axis == a
               ? join_grid(spec.grid)
               : format_double(v);
  };
  add("eps", axis_or(SweepAxis::kEpsilon, cfg.epsilon));
  add("T", format_double(cfg.T));
  add("dt", axis_or(SweepAxis::kDtMacro, cfg.dt_macro));
  add("dt-c", format_double(cfg.dt_coupled));
  add("tau", axis_or(SweepAxis::kTau, cfg.manifold.tau));
  add("M", std::to_string(cfg.manifold.micro.M));
  add("alpha", format_double(cfg.manifold.micro.alpha));
  add("np", std::to_string(cfg.n_p));
  add("criterion-order", std::to_string(cfg.criterion_order));
  add("alg", std::string(to_string(cfg.manifold.algorithm)));
  add("diff", std::string(to_string(cfg.manifold.diff)));
  add("warm-start", cfg.warm_start ? "true" : "false");
  if (spec.beta_hat) add("beta-hat", format_double(*spec.beta_hat));
  add("ref-dt", format_double(spec.reference_dt));
  add("jobs", std::to_string(spec.jobs));
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) {
      throw ConfigError("grid '" + text + "' must look like lo:hi:logN");
    }
    const double lo = to_double("grid", parts[0]);
    const double hi = to_double("grid", parts[1]);
    const std::string& spec = parts[2];
    const bool log = spec.rfind("log", 0) == 0;
    const bool lin = spec.rfind("lin", 0) == 0;
    if (!log && !lin) {
      throw ConfigError("grid '" + text + "': expected logN or linN");
    }
    const long n = to_long("grid", spec.substr(3));
    if (n < 0) throw ConfigError("grid '" + text + "': negative count");
    if (n == 0) return {};
    if (log) {
      if (!(lo > 0.0 && hi > 0.0)) {
        throw ConfigError("grid '" + text + "': log grid needs positive ends");
      }
      return logspace(lo, hi, static_cast<int>(n));
    }
    std::vector<double> out;
    for (long i = 0; i < n; ++i) {
      out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(t, ',')) {
    if (!item.empty()) out.push_back(to_double("grid", item));
  }
  return out;
}

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    if (item == "coupled") {
      out.push_back(kCoupledOnly);
      continue;
    }
    const long k = to_long("k", item);
    if (k < 0) throw ConfigError("'k' entries must be >= 0 or 'coupled'");
    out.push_back(static_cast<int>(k));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!is_known_key(key)) {
      throw ConfigError("unknown key '" + key + "' in " + path);
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

BenchmarkCase make_custom_case(const std::vector<double>& coeffs, double x0,
                               double y0) {
  if (coeffs.size() != 4 && coeffs.size() != 6) {
    throw ConfigError(
        "'coeffs' must be a11,a12,a21,a22 or a11,a12,a21,a22,b1,b2");
  }
  const double a11 = coeffs[0], a12 = coeffs[1], a21 = coeffs[2],
               a22 = coeffs[3];
  const double b1 = coeffs.size() == 6 ? coeffs[4] : 0.0;
  const double b2 = coeffs.size() == 6 ? coeffs[5] : 0.0;
  BenchmarkCase c;
  c.name = "custom";
  TwoScaleSystem& s = c.system;
  s.name = "custom";
  s.n_x = 1;
  s.n_y = 1;
  s.f = [=](const Vector& x, const Vector& y) {
    return Vector::Constant(1, a11 * x[0] + a12 * y[0] + b1).eval();
  };
  s.g = [=](const Vector& x, const Vector& y) {
    return Vector::Constant(1, a21 * x[0] + a22 * y[0] + b2).eval();
  };
  s.g_jac_y = [=](const Vector&, const Vector&) {
    return Matrix::Constant(1, 1, a22).eval();
  };
  s.g_jac_x = [=](const Vector&, const Vector&) {
    return Matrix::Constant(1, 1, a21).eval();
  };
  s.beta_hat = a22 < 0.0 ? -a22 : 1.0;
  c.x0 = Vector::Constant(1, x0);
  c.y0 = Vector::Constant(1, y0);
  c.defaults = DriverConfig{};
  c.reference_dt = c.defaults.dt_coupled;
  return c;
}

ParseOutcome parse(const std::vector<std::string>& args,
                   const std::optional<std::string>& env_jobs) {
  ParseOutcome outcome;
  CLI::App app{"High-order multiscale solver for stiff slow-fast ODEs",
               "mshom"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flags;
  std::string config_path;

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("run", "Simulate one problem"));
  subs.push_back(app.add_subcommand("sweep", "Convergence sweep"));
  subs.push_back(app.add_subcommand("riccati", "Linear-case Riccati orders"));
  subs.push_back(app.add_subcommand("list-problems", "List benchmarks"));
  for (std::size_t i = 0; i + 1 < subs.size(); ++i) {
    subs[i]->add_option("--config", config_path, "key=value settings file");
    for (const char* key : kKeys) {
      subs[i]->add_option_function<std::string>(
          std::string("--") + key,
          [&flags, key](const std::string& v) { flags[key] = v; });
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    outcome.proceed = false;
    outcome.exit_code = kExitOk;
    outcome.message = app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    outcome.proceed = false;
    outcome.exit_code = kExitOk;
    outcome.message = app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.proceed = false;
    outcome.exit_code = kExitUsage;
    outcome.message = e.what();
    return outcome;
  }

  RunSpec& spec = outcome.spec;
  for (auto* sub : subs) {
    if (sub->parsed()) spec.subcommand = subcommand_from(sub->get_name());
  }
  try {
    std::map<std::string, std::string> merged;
    if (!config_path.empty()) merged = read_config_file(config_path);
    for (const auto& [k, v] : flags) merged[k] = v;
    resolve(spec, merged, env_jobs);
  } catch (const std::exception& e) {
    outcome.proceed = false;
    outcome.exit_code = kExitUsage;
    outcome.message = e.what();
  }
  return outcome;
}

namespace {

struct RunRow {
  int k;
  double error;
  double T_c;
  long micro_calls;
  double wall_ms;
  std::string status;
};

void write_run_row(std::ostream& os, const RunSpec& spec, const RunRow& r,
                   double eps, double dt, double tau) {
  const DriverConfig& cfg = spec.config;
  os << spec.problem << ',' << k_label(r.k) << ','
     << to_string(cfg.manifold.algorithm) << ','
     << to_string(cfg.manifold.diff) << ',' << format_double(eps) << ','
     << format_double(dt) << ',' << format_double(tau) << ','
     << cfg.manifold.micro.M << ',' << format_double(cfg.manifold.micro.alpha)
     << ',' << format_double(r.T_c) << ',' << format_double(r.error) << ','
     << r.micro_calls << ',' << format_double(r.wall_ms) << ',' << r.status
     << '\n';
}

BenchmarkCase case_for(const RunSpec& spec) {
  BenchmarkCase c = spec.problem == "custom"
                        ? make_custom_case(spec.coeffs, spec.x0, spec.y0)
                        : find_case(spec.problem);
  if (spec.beta_hat) c.system.beta_hat = *spec.beta_hat;
  c.defaults.T = spec.config.T;
  return c;
}

int run_run(const RunSpec& spec, std::ostream& csv, std::ostream& report) {
  const BenchmarkCase c = case_for(spec);
  DriverConfig cfg = spec.config;
  csv << kRunCsvHeader << '\n';
  int exit_code = kExitOk;
  for (int k : spec.k_list) {
    RunRow row{k, std::nan(""), 0.0, 0, 0.0, "ok"};
    const auto start = std::chrono::steady_clock::now();
    try {
      SimulationResult sim;
      if (k == kCoupledOnly) {
        sim = simulate_coupled_only(c.system, c.x0, c.y0, cfg);
      } else {
        cfg.manifold.k = k;
        sim = simulate(c.system, c.x0, c.y0, cfg);
      }
      for (const auto& w : sim.warnings) report << "# warning: " << w << '\n';
      const Vector ref =
          c.exact_solution
              ? c.exact_solution(cfg.T, cfg.epsilon)
              : reference_solution(c, cfg.epsilon, spec.reference_dt);
      row.error = (sim.x_final - ref).norm();
      row.T_c = sim.T_c;
      row.micro_calls = sim.micro_calls_total;
    } catch (const ConfigError& e) {
      report << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      row.status = failure_status(e);
      report << "# k=" << k_label(k) << " failed: " << e.what() << '\n';
      exit_code = kExitNumerical;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    write_run_row(csv, spec, row, cfg.epsilon,
                  k == kCoupledOnly ? cfg.dt_coupled : cfg.dt_macro,
                  cfg.manifold.tau);
  }
  return exit_code;
}

int run_sweep_cmd(const RunSpec& spec, std::ostream& csv,
                  std::ostream& report) {
  const BenchmarkCase c = case_for(spec);
  SweepOptions opts;
  opts.jobs = spec.jobs;
  opts.reference_dt = spec.reference_dt;
  ConvergenceReport rep;
  try {
    rep = convergence_sweep(c, spec.k_list, spec.axis, spec.grid, spec.config,
                            opts);
  } catch (const ConfigError& e) {
    report << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  csv << kRunCsvHeader << '\n';
  for (const auto& r : rep.rows) {
    double eps = spec.config.epsilon;
    double dt = r.k == kCoupledOnly ? spec.config.dt_coupled
                                    : spec.config.dt_macro;
    double tau = spec.config.manifold.tau;
    if (spec.axis == SweepAxis::kEpsilon) eps = r.axis_value;
    if (spec.axis == SweepAxis::kDtMacro && r.k != kCoupledOnly) {
      dt = r.axis_value;
    }
    if (spec.axis == SweepAxis::kTau) tau = r.axis_value;
    write_run_row(csv, spec,
                  {r.k, r.error, r.T_c, r.micro_calls, r.wall_ms, r.status},
                  eps, dt, tau);
  }
  for (const auto& [k, fit] : rep.fits) {
    report << "# fit k=" << k_label(k) << " slope=" << format_double(fit.slope)
           << " intercept=" << format_double(fit.intercept)
           << " r2=" << format_double(fit.r2) << " points=" << fit.points
           << '\n';
  }
  return kExitOk;
}

int run_riccati_cmd(const RunSpec& spec, std::ostream& csv,
                    std::ostream& report) {
  const LinearTwoScale sys = spec.instance == "random"
                                 ? LinearTwoScale::Random(spec.nx, spec.ny,
                                                          spec.seed)
                                 : LinearTwoScale::Naive();
  csv << kRiccatiCsvHeader << '\n';
  for (double eps : spec.grid) {
    RiccatiSolution sol;
    try {
      sol = riccati_fixed_point(sys, eps);
    } catch (const std::exception& e) {
      report << "# eps=" << format_double(eps) << " failed: " << e.what()
             << '\n';
      return kExitNumerical;
    }
    for (int k : spec.k_list) {
      const RiccatiIterate it = riccati_iterates(sys, eps, k);
      csv << format_double(eps) << ',' << k << ','
          << format_double(operator_norm(it.C - sol.C_star)) << ','
          << format_double((it.d - sol.d_star).norm()) << ','
          << format_double(std::max(sol.residual_C, sol.residual_d)) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int execute(const RunSpec& spec, std::ostream& out, std::ostream& report) {
  if (spec.subcommand == Subcommand::kListProblems) {
    for (const auto& c : registry()) {
      out << c.name << "  n_x=" << c.system.n_x << " n_y=" << c.system.n_y
          << " T=" << format_double(c.defaults.T)
          << " eps=" << format_double(c.defaults.epsilon) << '\n';
    }
    return kExitOk;
  }

  std::ofstream file;
  if (!spec.output.empty()) {
    file.open(spec.output);
    if (!file) {
      report << "error: cannot write '" << spec.output << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& csv = spec.output.empty() ? out : file;
  for (const auto& [k, v] : spec.resolved) {
    report << "# " << k << " = " << v << '\n';
  }

  switch (spec.subcommand) {
    case Subcommand::kRun:
      return run_run(spec, csv, report);
    case Subcommand::kSweep:
      return run_sweep_cmd(spec, csv, report);
    case Subcommand::kRiccati:
      return run_riccati_cmd(spec, csv, report);
    case Subcommand::kListProblems:
      break;
  }
  return kExitOk;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_jobs;
  if (const char* j = std::getenv("MSHOM_JOBS")) env_jobs = j;
  const ParseOutcome parsed = parse(args, env_jobs);
  if (!parsed.proceed) {
    (parsed.exit_code == kExitOk ? std::cout : std::cerr)
        << parsed.message << '\n';
    return parsed.exit_code;
  }
  // CSV on stdout when no --out is given, so the report moves to stderr.
  std::ostream& report = parsed.spec.output.empty() ? std::cerr : std::cout;
  return execute(parsed.spec, std::cout, report);
}

}  // namespace mshom::cli
