#include "mshom/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mshom/errors.hpp"

namespace mshom {

void TwoScaleSystem::validate() const {
  if (n_x <= 0 || n_y <= 0) {
    throw ConfigError("system '" + name + "': dimensions must be positive");
  }
  if (!f || !g) {
    throw ConfigError("system '" + name + "': f and g are required");
  }
  if (!(beta_hat > 0.0)) {
    throw ConfigError("system '" + name + "': beta_hat must be positive");
  }
}

bool all_finite(const Vector& v) { return v.allFinite(); }

namespace {

double fd_step(double component) {
  static const double kRootEps =
      std::sqrt(std::numeric_limits<double>::epsilon());
  return kRootEps * std::max(1.0, std::abs(component));
}

}  // namespace

GJacobians jacobian_g_numeric(const TwoScaleSystem& system, const Vector& x,
                              const Vector& y) {
  GJacobians J{Matrix(system.n_y, system.n_y), Matrix(system.n_y, system.n_x)};
  Vector yp = y;
  for (int j = 0; j < system.n_y; ++j) {
    const double h = fd_step(y[j]);
    yp[j] = y[j] + h;
    const Vector gp = system.g(x, yp);
    yp[j] = y[j] - h;
    const Vector gm = system.g(x, yp);
    yp[j] = y[j];
    J.G_y.col(j) = (gp - gm) / (2.0 * h);
  }
  Vector xp = x;
  for (int j = 0; j < system.n_x; ++j) {
    const double h = fd_step(x[j]);
    xp[j] = x[j] + h;
    const Vector gp = system.g(xp, y);
    xp[j] = x[j] - h;
    const Vector gm = system.g(xp, y);
    xp[j] = x[j];
    J.G_x.col(j) = (gp - gm) / (2.0 * h);
  }
  return J;
}

GJacobians jacobian_g(const TwoScaleSystem& system, const Vector& x,
                      const Vector& y) {
  if (system.g_jac_y && system.g_jac_x) {
    return {system.g_jac_y(x, y), system.g_jac_x(x, y)};
  }
  GJacobians J = jacobian_g_numeric(system, x, y);
  if (system.g_jac_y) J.G_y = system.g_jac_y(x, y);
  if (system.g_jac_x) J.G_x = system.g_jac_x(x, y);
  return J;
}

SampleBox SampleBox::Centered(const Vector& x_center, const Vector& y_center,
                              double radius) {
  const Vector rx = Vector::Constant(x_center.size(), radius);
  const Vector ry = Vector::Constant(y_center.size(), radius);
  return {x_center - rx, x_center + rx, y_center - ry, y_center + ry};
}

double check_dissipativity(const TwoScaleSystem& system, int sample_count,
                           const SampleBox& box, std::uint64_t seed) {
  if (sample_count < 1) {
    throw ConfigError("check_dissipativity: sample_count must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    }
    return v;
  };

  double beta = std::numeric_limits<double>::infinity();
  for (int s = 0; s < sample_count; ++s) {
    const Vector x = draw(box.x_lo, box.x_hi);
    const Vector y = draw(box.y_lo, box.y_hi);
    const Vector y2 = draw(box.y_lo, box.y_hi);
    const Vector g1 = system.g(x, y);
    const Vector g2 = system.g(x, y2);
    if (!g1.allFinite() || !g2.allFinite()) {
      throw NumericalFailure("check_dissipativity: non-finite g at sample " +
                             std::to_string(s));
    }
    const Vector dy = y - y2;
    const double denom = dy.squaredNorm();
    if (denom == 0.0) continue;
    beta = std::min(beta, -(g1 - g2).dot(dy) / denom);
  }
  return beta;
}

double check_dissipativity(const TwoScaleSystem& system, int sample_count,
                           double box_radius, std::uint64_t seed) {
  if (!(box_radius > 0.0)) {
    throw ConfigError("check_dissipativity: box_radius must be positive");
  }
  return check_dissipativity(
      system, sample_count,
      SampleBox::Centered(Vector::Zero(system.n_x), Vector::Zero(system.n_y),
                          box_radius),
      seed);
}

}  // namespace mshom
