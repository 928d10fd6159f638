#pragma once

#include "mshom/steppers.hpp"
#include "mshom/system.hpp"

namespace mshom {

/// Where the base-case relaxation starts from.
enum class InitialGuess {
  kPreviousValue,  // last value produced by the same approximator
  kSupplied,       // caller-provided seed (warm start), zero if absent
  kZero,
};

/// Microscopic solver settings. The relaxation step is dt = alpha * eps.
struct MicroConfig {
  double alpha = 1.0;
  int M = 1;
  InitialGuess initial_guess = InitialGuess::kSupplied;
  Scheme scheme = Scheme::kForwardEuler;

  void validate() const;
};

struct MicroResult {
  Vector y;
  int calls = 1;
};

/// Relaxes dy/dt = g(x, y) / eps - h for M steps of size alpha * eps from
/// y0. The stationary point solves g(x, y) = eps * h.
///
/// Throws NumericalFailure (carrying the step index) on a non-finite iterate.
MicroResult relax_solve(const TwoScaleSystem& system, const Vector& x,
                        const Vector& h, const Vector& y0, double epsilon,
                        const MicroConfig& config);

/// Forward-Euler relaxation contracts when alpha * beta < 2.
bool relaxation_stable(const MicroConfig& config, double beta_hat);

}  // namespace mshom
