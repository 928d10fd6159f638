#include <gtest/gtest.h>

#include <cmath>

#include "mshom/bench.hpp"
#include "mshom/driver.hpp"
#include "mshom/errors.hpp"
#include "mshom/micro.hpp"
#include "test_util.hpp"

namespace mshom {
namespace {

using testing::scalar;

TwoScaleSystem linear_system() { return find_case("naive").system; }

MicroConfig micro(double alpha, int M) {
  MicroConfig c;
  c.alpha = alpha;
  c.M = M;
  return c;
}

TEST(Relax, OneExactStepOnLinear) {
  auto s = linear_system();
  for (double y0 : {-3.0, 0.0, 7.5}) {
    auto r = relax_solve(s, scalar(1.0), scalar(0.0), scalar(y0), 1e-3,
                         micro(1.0, 1));
    EXPECT_DOUBLE_EQ(r.y[0], 1.0);
    EXPECT_EQ(r.calls, 1);
  }
}

TEST(Relax, StationaryStartIsUnchanged) {
  auto s = linear_system();
  const double eps = 0.01, x = 2.0, h = 3.0;
  const double y0 = x - eps * h;  // g(x, y0) = eps h
  for (int M : {1, 5, 40}) {
    auto r = relax_solve(s, scalar(x), scalar(h), scalar(y0), eps,
                         micro(0.3, M));
    EXPECT_NEAR(r.y[0], y0, 1e-15);
  }
}

TEST(Relax, NaiveParametersRecoverRoot) {
  auto c = find_case("naive");
  const auto& m = c.defaults.manifold.micro;
  for (double x : {-2.0, 0.1, 5.0}) {
    auto r = relax_solve(c.system, scalar(x), scalar(0.0), scalar(0.0),
                         c.defaults.epsilon, m);
    EXPECT_DOUBLE_EQ(r.y[0], x);
  }
}

TEST(Relax, ResidualGeometricInM) {
  auto s = linear_system();
  const double eps = 1e-2, x = 1.0, h = 0.5;
  for (double alpha : {0.2, 0.9, 1.5}) {
    double previous = INFINITY;
    for (int M = 1; M <= 30; ++M) {
      auto r = relax_solve(s, scalar(x), scalar(h), scalar(0.0), eps,
                           micro(alpha, M));
      const double res = std::abs(x - r.y[0] - eps * h);
      const double expect =
          std::pow(std::abs(1.0 - alpha), M) * std::abs(x - eps * h);
      EXPECT_NEAR(res, expect, 1e-14);
      EXPECT_LE(res, previous);
      previous = res;
    }
  }
}

// Starting point: the fast state where the layer exit test fired, pushed
// off the manifold by 0.1. This is the region the relaxation works in.
TEST(Relax, DoublingMOnBenchmarks) {
  for (const auto& c : registry()) {
    const auto& d = c.defaults;
    auto layer = run_coupled_stage(c.system, c.x0, c.y0, d);
    const Vector x = layer.x;
    const Vector y0 = layer.y.array() + 0.1;
    const Vector h = Vector::Zero(c.system.n_y);
    double previous = INFINITY;
    for (int M = 1; M <= 64; M *= 2) {
      MicroConfig m = d.manifold.micro;
      m.M = M;
      auto r = relax_solve(c.system, x, h, y0, d.epsilon, m);
      const double res = c.system.g(x, r.y).norm();
      EXPECT_LE(res, previous * (1 + 1e-12) + 1e-15)
          << c.name << " M=" << M;
      previous = res;
    }
  }
}

TEST(Relax, ConvergesToRootWithinBound) {
  // enzyme at x = 1: gamma = x / (x + 1), beta = x + 1 = 2.
  auto c = find_case("enzyme");
  const double x = 1.0, gamma = 0.5, beta = 2.0, y0 = -1.0;
  for (int M : {1, 4, 16}) {
    MicroConfig m = micro(0.3, M);
    auto r = relax_solve(c.system, scalar(x), scalar(0.0), scalar(y0), 1e-3,
                         m);
    const double bound =
        10.0 * std::pow(std::abs(1.0 - m.alpha * beta), M) *
        std::abs(y0 - gamma);
    EXPECT_LE(std::abs(r.y[0] - gamma), bound) << "M=" << M;
  }
}

TEST(Relax, NonFiniteCarriesStepIndex) {
  TwoScaleSystem s = linear_system();
  s.g = [](const Vector&, const Vector& y) {
    return Vector(y.array().square());
  };
  try {
    relax_solve(s, scalar(0.0), scalar(0.0), scalar(10.0), 1.0,
                micro(1.0, 50));
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos)
        << e.what();
  }
}

TEST(Relax, ConfigValidation) {
  EXPECT_THROW(micro(0.0, 1).validate(), ConfigError);
  EXPECT_THROW(micro(1.0, 0).validate(), ConfigError);
  EXPECT_TRUE(relaxation_stable(micro(0.5, 1), 1.5));
  EXPECT_FALSE(relaxation_stable(micro(1.0, 1), 2.5));
}

}  // namespace
}  // namespace mshom
