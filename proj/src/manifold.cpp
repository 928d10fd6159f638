#include "mshom/manifold.hpp"

#include <string>
#include <utility>

#include "mshom/errors.hpp"

namespace mshom {

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kType1 ? "type1" : "type2";
}

std::string_view to_string(DiffScheme scheme) {
  return scheme == DiffScheme::kForward ? "forward" : "central";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "1" || name == "type1") return Algorithm::kType1;
  if (name == "2" || name == "type2") return Algorithm::kType2;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

DiffScheme parse_diff_scheme(std::string_view name) {
  if (name == "forward") return DiffScheme::kForward;
  if (name == "central") return DiffScheme::kCentral;
  throw ConfigError("unknown difference scheme '" + std::string(name) + "'");
}

void ManifoldConfig::validate() const {
  if (k < 0) throw ConfigError("manifold: k must be >= 0");
  if (!(tau > 0.0)) throw ConfigError("manifold: tau must be positive");
  micro.validate();
}

Vector directional_difference(const SlowMap& Gamma, const Vector& x,
                              const Vector& v, double tau, DiffScheme scheme) {
  if (!(tau > 0.0)) throw ConfigError("directional_difference: tau <= 0");
  if (scheme == DiffScheme::kForward) {
    return (Gamma(x + tau * v) - Gamma(x)) / tau;
  }
  return (Gamma(x + tau * v) - Gamma(x - tau * v)) / (2.0 * tau);
}

namespace {

// Below this reciprocal condition estimate G_y is treated as singular.
constexpr double kMinRcond = 1e-13;

Eigen::PartialPivLU<Matrix> factor_g_y(const Matrix& G_y) {
  Eigen::PartialPivLU<Matrix> lu(G_y);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond)) {
    throw SingularityError("dg/dy is singular or ill-conditioned (rcond = " +
                           std::to_string(rcond) + ")");
  }
  return lu;
}

struct FirstOrder {
  Vector gamma1;
  // Directional derivative of gamma along f(x, gamma): G_y * gamma1.
  Vector drift;
};

FirstOrder first_order(const TwoScaleSystem& system, const Vector& x,
                       const Vector& gamma_x, const GJacobians& J,
                       const Eigen::PartialPivLU<Matrix>& lu) {
  const Vector F = system.f(x, gamma_x);
  Vector drift = -lu.solve(J.G_x * F);  // grad(gamma) F
  Vector gamma1 = lu.solve(drift);
  return {std::move(gamma1), std::move(drift)};
}

// One evaluation tree. Every relax() call is one microscopic solve.
class Recursion {
 public:
  Recursion(const TwoScaleSystem& system, double epsilon,
            const ManifoldConfig& config, const Vector& base_guess)
      : system_(system),
        epsilon_(epsilon),
        config_(config),
        base_guess_(base_guess.size() == system.n_y
                        ? base_guess
                        : Vector::Zero(system.n_y)) {}

  ManifoldEval type2(int k, const Vector& x) {
    if (k == 0) return {relax(0, x, Vector::Zero(system_.n_y), base_guess_),
                        std::nullopt, 1};
    ManifoldEval lower = type2(k - 1, x);
    return lift(k, x, std::move(lower),
                [this, k](const Vector& z) { return type2(k - 1, z); });
  }

  ManifoldEval type1(int k, const Vector& x) {
    if (k == 0) return {relax(0, x, Vector::Zero(system_.n_y), base_guess_),
                        std::nullopt, 1};
    if (k >= 3) {
      ManifoldEval lower = type1(k - 1, x);
      return lift(k, x, std::move(lower),
                  [this, k](const Vector& z) { return type1(k - 1, z); });
    }

    const Vector gamma = relax(k, x, Vector::Zero(system_.n_y), base_guess_);
    const GJacobians J = jacobian_g(system_, x, gamma);
    const auto lu = factor_g_y(J.G_y);
    FirstOrder fo = first_order(system_, x, gamma, J, lu);
    Vector gamma_eps1 = gamma + epsilon_ * fo.gamma1;
    if (k == 1) return {std::move(gamma_eps1), std::move(fo.drift), 1};

    // k == 2: correct Gamma_1 with one Newton-like step against the
    // difference quotient of Gamma_1 along F_1 = f(x, Gamma_1).
    const Vector F1 = system_.f(x, gamma_eps1);
    long calls = 1;
    Vector slope;
    const double tau = config_.tau;
    if (config_.diff == DiffScheme::kForward) {
      ManifoldEval plus = type1(1, x + tau * F1);
      calls += plus.micro_calls;
      slope = (plus.value - gamma_eps1) / tau;
    } else {
      ManifoldEval plus = type1(1, x + tau * F1);
      ManifoldEval minus = type1(1, x - tau * F1);
      calls += plus.micro_calls + minus.micro_calls;
      slope = (plus.value - minus.value) / (2.0 * tau);
    }
    Vector value =
        gamma_eps1 +
        lu.solve(epsilon_ * slope - system_.g(x, gamma_eps1));
    if (!value.allFinite()) {
      throw NumericalFailure("manifold: non-finite value at recursion level 2");
    }
    return {std::move(value), std::move(slope), calls};
  }

 private:
  // Gamma_k from Gamma_{k-1}: form the difference quotient along
  // v = f(x, Gamma_{k-1}(x)) and relax g(x, y) = eps * slope.
  template <typename Child>
  ManifoldEval lift(int k, const Vector& x, ManifoldEval lower,
                    Child&& child) {
    const Vector v = system_.f(x, lower.value);
    const double tau = config_.tau;
    long calls = lower.micro_calls;
    Vector slope;
    if (config_.diff == DiffScheme::kForward) {
      ManifoldEval plus = child(x + tau * v);
      calls += plus.micro_calls;
      slope = (plus.value - lower.value) / tau;
    } else {
      ManifoldEval plus = child(x + tau * v);
      ManifoldEval minus = child(x - tau * v);
      calls += plus.micro_calls + minus.micro_calls;
      slope = (plus.value - minus.value) / (2.0 * tau);
    }
    Vector value = relax(k, x, slope, lower.value);
    return {std::move(value), std::move(slope), calls + 1};
  }

  Vector relax(int level, const Vector& x, const Vector& h,
               const Vector& y0) {
    try {
      return relax_solve(system_, x, h, y0, epsilon_, config_.micro).y;
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string(e.what()) + " (manifold level " +
                             std::to_string(level) + ")");
    }
  }

  const TwoScaleSystem& system_;
  double epsilon_;
  const ManifoldConfig& config_;
  Vector base_guess_;
};

}  // namespace

Vector gamma1_analytic(const TwoScaleSystem& system, const Vector& x,
                       const Vector& gamma_x) {
  const GJacobians J = jacobian_g(system, x, gamma_x);
  const auto lu = factor_g_y(J.G_y);
  return first_order(system, x, gamma_x, J, lu).gamma1;
}

ManifoldEval hmm_type1(const TwoScaleSystem& system, const Vector& x,
                       double epsilon, const ManifoldConfig& config,
                       const Vector& base_guess) {
  if (!(epsilon > 0.0)) throw ConfigError("hmm_type1: epsilon must be > 0");
  return Recursion(system, epsilon, config, base_guess).type1(config.k, x);
}

ManifoldEval hmm_type2(const TwoScaleSystem& system, const Vector& x,
                       double epsilon, const ManifoldConfig& config,
                       const Vector& base_guess) {
  if (!(epsilon > 0.0)) throw ConfigError("hmm_type2: epsilon must be > 0");
  return Recursion(system, epsilon, config, base_guess).type2(config.k, x);
}

ManifoldEval evaluate_manifold(const TwoScaleSystem& system, const Vector& x,
                               double epsilon, const ManifoldConfig& config,
                               const Vector& base_guess) {
  return config.algorithm == Algorithm::kType1
             ? hmm_type1(system, x, epsilon, config, base_guess)
             : hmm_type2(system, x, epsilon, config, base_guess);
}

long micro_call_count(Algorithm algorithm, DiffScheme scheme, int k) {
  if (k < 0) return 0;
  auto pow_l = [](long base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  };
  if (scheme == DiffScheme::kForward) {
    if (algorithm == Algorithm::kType2) return pow_l(2, k + 1) - 1;
    return k <= 1 ? 1 : 3 * pow_l(2, k - 2) - 1;
  }
  if (algorithm == Algorithm::kType2) return (pow_l(3, k + 1) - 1) / 2;
  // Type1 central: T(1) = 1, T(2) = 3, T(k) = 3 T(k-1) + 1, so
  // T(k) = (7 * 3^(k-2) - 1) / 2 for k >= 2.
  return k <= 1 ? 1 : (7 * pow_l(3, k - 2) - 1) / 2;
}

ManifoldApproximator::ManifoldApproximator(const TwoScaleSystem& system,
                                           double epsilon,
                                           ManifoldConfig config)
    : system_(system), epsilon_(epsilon), config_(std::move(config)) {
  config_.validate();
  if (!(epsilon_ > 0.0)) throw ConfigError("approximator: epsilon <= 0");
}

void ManifoldApproximator::seed(Vector y) {
  seed_ = std::move(y);
  cache_.clear();
}

void ManifoldApproximator::clear_seed() {
  seed_.reset();
  cache_.clear();
}

Vector ManifoldApproximator::current_guess() const {
  switch (config_.micro.initial_guess) {
    case InitialGuess::kSupplied:
      if (seed_) return *seed_;
      break;
    case InitialGuess::kPreviousValue:
      if (last_value_) return *last_value_;
      break;
    case InitialGuess::kZero:
      break;
  }
  return Vector::Zero(system_.n_y);
}

ManifoldEval ManifoldApproximator::evaluate(const Vector& x) {
  ++evaluations_;
  const bool use_cache =
      config_.cache &&
      config_.micro.initial_guess != InitialGuess::kPreviousValue;
  std::vector<double> key;
  if (use_cache) {
    key.assign(x.data(), x.data() + x.size());
    if (auto it = cache_.find(key); it != cache_.end()) {
      ManifoldEval hit = it->second;
      hit.micro_calls = 0;
      return hit;
    }
  }
  ManifoldEval result =
      evaluate_manifold(system_, x, epsilon_, config_, current_guess());
  micro_calls_ += result.micro_calls;
  last_value_ = result.value;
  if (use_cache) cache_.emplace(std::move(key), result);
  return result;
}

}  // namespace mshom
