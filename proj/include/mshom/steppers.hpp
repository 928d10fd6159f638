#pragma once

#include <functional>
#include <string_view>

#include "mshom/system.hpp"

namespace mshom {

/// Autonomous right-hand side z' = eval(z).
struct VectorField {
  int dim = 0;
  std::function<Vector(const Vector&)> eval;
};

enum class Scheme { kForwardEuler, kRK4 };

std::string_view to_string(Scheme scheme);
/// Accepts "fe", "euler", "forward-euler", "rk4". Throws ConfigError.
Scheme parse_scheme(std::string_view name);

/// state + dt * field(state). Throws NumericalFailure on non-finite output.
Vector euler_step(const VectorField& field, const Vector& state, double dt);

/// Classical fourth-order Runge-Kutta step.
/// Throws NumericalFailure on non-finite output.
Vector rk4_step(const VectorField& field, const Vector& state, double dt);

Vector step(Scheme scheme, const VectorField& field, const Vector& state,
            double dt);

}  // namespace mshom
