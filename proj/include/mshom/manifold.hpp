#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "mshom/micro.hpp"
#include "mshom/system.hpp"

namespace mshom {

/// Jacobian-assisted recursion ("type1") or the pure fixed-point
/// recursion ("type2").
enum class Algorithm { kType1, kType2 };
enum class DiffScheme { kForward, kCentral };

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(DiffScheme scheme);
/// Accepts "1", "type1", "2", "type2".
Algorithm parse_algorithm(std::string_view name);
DiffScheme parse_diff_scheme(std::string_view name);

struct ManifoldConfig {
  int k = 0;
  Algorithm algorithm = Algorithm::kType2;
  DiffScheme diff = DiffScheme::kForward;
  double tau = 1e-6;
  MicroConfig micro;
  /// Memoise top-level evaluations in ManifoldApproximator. Off by default;
  /// a cache hit performs no microscopic solves, so call counts change.
  bool cache = false;

  void validate() const;
};

struct ManifoldEval {
  Vector value;
  /// Top-level directional-derivative estimate along f(x, value_{k-1}).
  /// Empty for k = 0.
  std::optional<Vector> slope;
  long micro_calls = 0;
};

using SlowMap = std::function<Vector(const Vector&)>;

/// Difference quotient of `Gamma` at x along v:
///   forward: (Gamma(x + v tau) - Gamma(x)) / tau
///   central: (Gamma(x + v tau) - Gamma(x - v tau)) / (2 tau)
Vector directional_difference(const SlowMap& Gamma, const Vector& x,
                              const Vector& v, double tau, DiffScheme scheme);

/// First-order manifold correction -G_y^{-2} G_x f(x, gamma) with the
/// Jacobians taken at (x, gamma_x). Two LU solves, no explicit inverse.
/// Throws SingularityError when G_y is numerically singular.
Vector gamma1_analytic(const TwoScaleSystem& system, const Vector& x,
                       const Vector& gamma_x);

/// Jacobian-assisted recursion. `base_guess` seeds every base-case relaxation (zero if
/// empty). Inner relaxations start from the lower-order value at x.
ManifoldEval hmm_type1(const TwoScaleSystem& system, const Vector& x,
                       double epsilon, const ManifoldConfig& config,
                       const Vector& base_guess = Vector());

/// Fixed-point recursion: Gamma_k solves g(x, Gamma_k) = eps * D Gamma_{k-1} f(x,
/// Gamma_{k-1}) with the derivative replaced by a difference quotient.
ManifoldEval hmm_type2(const TwoScaleSystem& system, const Vector& x,
                       double epsilon, const ManifoldConfig& config,
                       const Vector& base_guess = Vector());

/// Dispatches on config.algorithm.
ManifoldEval evaluate_manifold(const TwoScaleSystem& system, const Vector& x,
                               double epsilon, const ManifoldConfig& config,
                               const Vector& base_guess = Vector());

/// Number of microscopic solves one evaluation performs without caching.
long micro_call_count(Algorithm algorithm, DiffScheme scheme, int k);

/// Stateful front end over hmm_type1/hmm_type2 for one (system, eps,
/// config). Tracks call counters, the initial-guess policy and the optional
/// cache. Not safe for concurrent use; use one instance per worker.
class ManifoldApproximator {
 public:
  ManifoldApproximator(const TwoScaleSystem& system, double epsilon,
                       ManifoldConfig config);

  ManifoldEval evaluate(const Vector& x);

  /// Supplies the base-case starting point for subsequent evaluations
  /// (used under InitialGuess::kSupplied).
  void seed(Vector y);
  void clear_seed();

  long micro_calls() const { return micro_calls_; }
  long evaluations() const { return evaluations_; }
  const ManifoldConfig& config() const { return config_; }
  double epsilon() const { return epsilon_; }

 private:
  Vector current_guess() const;

  const TwoScaleSystem& system_;
  double epsilon_;
  ManifoldConfig config_;
  std::optional<Vector> seed_;
  std::optional<Vector> last_value_;
  std::map<std::vector<double>, ManifoldEval> cache_;
  long micro_calls_ = 0;
  long evaluations_ = 0;
};

}  // namespace mshom
