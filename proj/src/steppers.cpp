#include "mshom/steppers.hpp"

#include <string>

#include "mshom/errors.hpp"

namespace mshom {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kForwardEuler:
      return "fe";
    case Scheme::kRK4:
      return "rk4";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "fe" || name == "euler" || name == "forward-euler") {
    return Scheme::kForwardEuler;
  }
  if (name == "rk4") return Scheme::kRK4;
  throw ConfigError("unknown stepper scheme '" + std::string(name) + "'");
}

namespace {

void check_dt(double dt) {
  if (!(dt > 0.0)) throw ConfigError("step size must be positive");
}

Vector checked(Vector z, const char* who) {
  if (!z.allFinite()) {
    throw NumericalFailure(std::string(who) + ": non-finite state");
  }
  return z;
}

}  // namespace

Vector euler_step(const VectorField& field, const Vector& state, double dt) {
  check_dt(dt);
  return checked(state + dt * field.eval(state), "euler_step");
}

Vector rk4_step(const VectorField& field, const Vector& state, double dt) {
  check_dt(dt);
  const Vector k1 = field.eval(state);
  const Vector k2 = field.eval(state + (0.5 * dt) * k1);
  const Vector k3 = field.eval(state + (0.5 * dt) * k2);
  const Vector k4 = field.eval(state + dt * k3);
  return checked(state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
                 "rk4_step");
}

Vector step(Scheme scheme, const VectorField& field, const Vector& state,
            double dt) {
  return scheme == Scheme::kRK4 ? rk4_step(field, state, dt)
                                : euler_step(field, state, dt);
}

}  // namespace mshom
