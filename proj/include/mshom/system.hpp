#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace mshom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A dissipative slow-fast system
///
///   dx/dt = f(x, y),
///   dy/dt = g(x, y) / eps,
///
/// where g(x, .) is assumed strongly dissipative so that the frozen fast
/// dynamics contract to a unique root y = gamma(x) of g(x, y) = 0.
///
/// Systems are plain values built from closures; the library has no
/// built-in problem list beyond the benchmark registry in bench.hpp.
struct TwoScaleSystem {
  using Field = std::function<Vector(const Vector& x, const Vector& y)>;
  using Jacobian = std::function<Matrix(const Vector& x, const Vector& y)>;

  std::string name;
  int n_x = 0;
  int n_y = 0;
  Field f;
  Field g;
  Jacobian g_jac_y;  // optional, n_y x n_y
  Jacobian g_jac_x;  // optional, n_y x n_x
  /// Estimate of the dissipativity constant; drives the layer exit test.
  double beta_hat = 1.0;

  /// Throws ConfigError if dimensions, callables or beta_hat are invalid.
  void validate() const;
};

struct GJacobians {
  Matrix G_y;  // n_y x n_y
  Matrix G_x;  // n_y x n_x
};

/// dg/dy and dg/dx at (x, y). Uses the analytic Jacobians when the system
/// provides them and central differences otherwise, with per-component step
/// sqrt(machine eps) * max(1, |z_j|).
GJacobians jacobian_g(const TwoScaleSystem& system, const Vector& x,
                      const Vector& y);

/// Same as jacobian_g but always uses finite differences.
GJacobians jacobian_g_numeric(const TwoScaleSystem& system, const Vector& x,
                              const Vector& y);

/// Axis-aligned sampling region in (x, y) space.
struct SampleBox {
  Vector x_lo, x_hi;
  Vector y_lo, y_hi;

  /// Cube of half-width `radius` centred at (x_center, y_center).
  static SampleBox Centered(const Vector& x_center, const Vector& y_center,
                            double radius);
};

/// Sampled estimate of the dissipativity constant
///
///   beta = min  -<g(x,y) - g(x,y'), y - y'> / |y - y'|^2
///
/// over `sample_count` random triples (x, y, y') drawn from `box`.
/// Negative results mean g(x, .) is not dissipative on the box.
/// Throws NumericalFailure naming the sample if g returns a non-finite value.
double check_dissipativity(const TwoScaleSystem& system, int sample_count,
                           const SampleBox& box, std::uint64_t seed);

/// Convenience overload sampling the cube [-box_radius, box_radius]^(n_x+n_y).
double check_dissipativity(const TwoScaleSystem& system, int sample_count,
                           double box_radius, std::uint64_t seed);

bool all_finite(const Vector& v);

}  // namespace mshom
