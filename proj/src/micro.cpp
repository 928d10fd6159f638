#include "mshom/micro.hpp"

#include <string>

#include "mshom/errors.hpp"

namespace mshom {

void MicroConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("micro: alpha must be positive");
  if (M < 1) throw ConfigError("micro: M must be >= 1");
}

bool relaxation_stable(const MicroConfig& config, double beta_hat) {
  return config.alpha * beta_hat < 2.0;
}

MicroResult relax_solve(const TwoScaleSystem& system, const Vector& x,
                        const Vector& h, const Vector& y0, double epsilon,
                        const MicroConfig& config) {
  if (!(epsilon > 0.0)) throw ConfigError("relax_solve: epsilon must be > 0");
  const double dt = config.alpha * epsilon;
  const double inv_eps = 1.0 / epsilon;

  Vector y = y0;
  if (config.scheme == Scheme::kForwardEuler) {
    // dt / eps == alpha, so the update needs no division by eps.
    const Vector dt_h = dt * h;
    for (int m = 0; m < config.M; ++m) {
      y += config.alpha * system.g(x, y) - dt_h;
      if (!y.allFinite()) {
        throw NumericalFailure("relax_solve: non-finite iterate at step " +
                               std::to_string(m + 1));
      }
    }
    return {std::move(y), 1};
  }

  const VectorField field{system.n_y, [&](const Vector& z) -> Vector {
                            return inv_eps * system.g(x, z) - h;
                          }};
  for (int m = 0; m < config.M; ++m) {
    try {
      y = step(config.scheme, field, y, dt);
    } catch (const NumericalFailure&) {
      throw NumericalFailure("relax_solve: non-finite iterate at step " +
                             std::to_string(m + 1));
    }
  }
  return {std::move(y), 1};
}

}  // namespace mshom
