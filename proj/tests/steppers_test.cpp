#include <gtest/gtest.h>

#include <cmath>

#include "mshom/errors.hpp"
#include "mshom/steppers.hpp"
#include "test_util.hpp"

namespace mshom {
namespace {

using testing::scalar;

VectorField linear(double lambda) {
  return {1, [lambda](const Vector& z) { return Vector(lambda * z); }};
}

const VectorField kZero{2, [](const Vector& z) { return Vector::Zero(z.size()).eval(); }};

TEST(Euler, ZeroFieldIsIdentity) {
  Vector z(2);
  z << 3.0, -1.5;
  EXPECT_EQ(euler_step(kZero, z, 0.7), z);
}

TEST(Euler, LinearDecay) {
  EXPECT_DOUBLE_EQ(euler_step(linear(-1.0), scalar(1.0), 0.1)[0], 0.9);
}

TEST(Euler, RelaxationLandsOnTarget) {
  const double eps = 1e-3;
  const double x = 0.75;
  VectorField relax{1, [=](const Vector& z) {
                      return Vector((x - z.array()) / eps);
                    }};
  EXPECT_DOUBLE_EQ(euler_step(relax, scalar(-4.0), eps)[0], x);
}

TEST(Rk4, ZeroFieldIsIdentity) {
  Vector z(2);
  z << 0.25, 8.0;
  EXPECT_EQ(rk4_step(kZero, z, 0.3), z);
}

TEST(Rk4, TaylorPolynomialOnLinearField) {
  // One RK4 step on z' = lambda z multiplies by the degree-4 Taylor
  // polynomial of exp(lambda dt).
  for (double lambda : {1.0, -2.0, 0.5}) {
    for (double dt : {0.1, 0.01, 0.37}) {
      const double h = lambda * dt;
      double taylor = 0.0, term = 1.0;
      for (int j = 0; j <= 4; ++j) {
        taylor += term;
        term *= h / (j + 1);
      }
      EXPECT_NEAR(rk4_step(linear(lambda), scalar(1.0), dt)[0], taylor,
                  1e-15);
    }
  }
  EXPECT_NEAR(rk4_step(linear(1.0), scalar(1.0), 0.1)[0], 1.1051708333,
              1e-10);
}

TEST(Rk4, GlobalFourthOrder) {
  auto error = [](int n) {
    Vector z = scalar(1.0);
    for (int i = 0; i < n; ++i) z = rk4_step(linear(-1.0), z, 1.0 / n);
    return std::abs(z[0] - std::exp(-1.0));
  };
  for (int n : {8, 16, 32}) {
    const double ratio = error(n) / error(2 * n);
    EXPECT_NEAR(ratio, 16.0, 1.5) << "n=" << n;
  }
}

TEST(Steppers, ExactOnConstantFields) {
  VectorField c{2, [](const Vector&) {
                  Vector v(2);
                  v << 0.3, -1.25;
                  return v;
                }};
  Vector z(2);
  z << 1.0, 2.0;
  Vector expect(2);
  expect << 1.0 + 0.5 * 0.3, 2.0 - 0.5 * 1.25;
  EXPECT_TRUE(euler_step(c, z, 0.5).isApprox(expect, 1e-15));
  EXPECT_TRUE(rk4_step(c, z, 0.5).isApprox(expect, 1e-15));
}

TEST(Steppers, Errors) {
  EXPECT_THROW(euler_step(linear(1.0), scalar(1.0), 0.0), ConfigError);
  EXPECT_THROW(rk4_step(linear(1.0), scalar(1.0), -1.0), ConfigError);
  VectorField blow{1, [](const Vector& z) { return Vector(z.array().exp()); }};
  EXPECT_THROW(euler_step(blow, scalar(800.0), 1.0), NumericalFailure);
  EXPECT_THROW(rk4_step(blow, scalar(800.0), 1.0), NumericalFailure);
}

TEST(Steppers, SchemeNames) {
  EXPECT_EQ(parse_scheme("rk4"), Scheme::kRK4);
  EXPECT_EQ(parse_scheme("fe"), Scheme::kForwardEuler);
  EXPECT_EQ(parse_scheme(to_string(Scheme::kForwardEuler)),
            Scheme::kForwardEuler);
  EXPECT_THROW(parse_scheme("bdf2"), ConfigError);
}

}  // namespace
}  // namespace mshom
