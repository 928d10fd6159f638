#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mshom/bench.hpp"
#include "mshom/errors.hpp"
#include "test_util.hpp"

namespace mshom {
namespace {

using testing::scalar;

// Same closed form in long double, with the small eigenvalue written as
// 2 / (1 + sqrt(1 + 4 eps)) to avoid the cancellation.
long double naive_exact_ld(long double t, long double x0, long double y0,
                           long double eps) {
  const long double root = std::sqrt(1.0L + 4.0L * eps);
  const long double l1 = -(1.0L + root) / (2.0L * eps);
  const long double l2 = 2.0L / (1.0L + root);
  const long double gap = l1 - l2;
  return (-l2 * x0 + y0) / gap * std::exp(l1 * t) +
         (l1 * x0 - y0) / gap * std::exp(l2 * t);
}

TEST(Registry, FiveCases) {
  auto cases = registry();
  ASSERT_EQ(cases.size(), 5u);
  std::set<std::string> names;
  for (const auto& c : cases) names.insert(c.name);
  EXPECT_EQ(names, (std::set<std::string>{"naive", "enzyme", "forced-vdp",
                                          "chua", "vdp"}));
  EXPECT_THROW(find_case("nosuch"), ConfigError);
}

TEST(Registry, DefaultParameters) {
  auto naive = find_case("naive");
  EXPECT_EQ(naive.x0[0], 1.0);
  EXPECT_EQ(naive.y0[0], 2.0);
  EXPECT_EQ(naive.defaults.T, 4.0);
  EXPECT_EQ(naive.defaults.epsilon, 1e-5);
  EXPECT_EQ(naive.defaults.manifold.micro.M, 1);
  EXPECT_EQ(naive.defaults.manifold.micro.alpha, 1.0);
  EXPECT_EQ(naive.system.beta_hat, 1.0);

  auto enzyme = find_case("enzyme");
  EXPECT_EQ(enzyme.defaults.manifold.micro.M, 10);
  EXPECT_EQ(enzyme.defaults.manifold.micro.alpha, 0.5);
  EXPECT_EQ(enzyme.defaults.manifold.tau, 1e-6);
  EXPECT_EQ(enzyme.defaults.dt_coupled, 1e-5);
  EXPECT_EQ(enzyme.system.beta_hat, 1.5);
  // f = -x + (x + c) y with c = 0.5.
  EXPECT_DOUBLE_EQ(enzyme.system.f(scalar(0.0), scalar(1.0))[0], 0.5);

  auto fvdp = find_case("forced-vdp");
  EXPECT_EQ(fvdp.x0, (Vector(2) << 3.0, 1.0).finished());
  EXPECT_EQ(fvdp.defaults.manifold.micro.M, 25);
  EXPECT_EQ(fvdp.defaults.manifold.micro.alpha, 0.1);
  EXPECT_EQ(fvdp.system.beta_hat, 0.01);

  auto chua = find_case("chua");
  EXPECT_EQ(chua.defaults.dt_coupled, 1e-6);
  EXPECT_EQ(chua.system.beta_hat, 10.0);
  // g = x2 - c3 y^3 - c2 y^2 - c1 y with c1 = 7, c2 = 15, c3 = 20.
  Vector x(2);
  x << 0.0, 0.0;
  for (double y : {-1.0, 0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(chua.system.g(x, scalar(y))[0],
                     -(20 * y * y * y + 15 * y * y + 7 * y));
  }

  auto vdp = find_case("vdp");
  EXPECT_EQ(vdp.defaults.T, 5.0);
  EXPECT_EQ(vdp.defaults.dt_macro, 2e-2);
  EXPECT_EQ(vdp.defaults.manifold.micro.M, 20);
  EXPECT_EQ(vdp.system.beta_hat, 3.0);
}

TEST(NaiveExact, InitialValueAndSlope) {
  for (double eps : {1e-5, 1e-3, 0.1}) {
    EXPECT_NEAR(naive_exact(0.0, 1.0, 2.0, eps), 1.0, 1e-9);
  }
  const double eps = 1e-2, h = 1e-7;
  const double slope =
      (naive_exact(h, 1.0, 2.0, eps) - naive_exact(-h, 1.0, 2.0, eps)) /
      (2 * h);
  EXPECT_NEAR(slope, 2.0, 1e-5);
}

TEST(NaiveExact, CancellationOffsetAndCoupledReference) {
  const double eps = 1e-5, T = 4.0;
  const double accurate = static_cast<double>(naive_exact_ld(T, 1, 2, eps));
  // The literal formula loses ~1e-9 to cancellation at this eps.
  EXPECT_LT(std::abs(naive_exact(T, 1, 2, eps) - accurate), 2e-9);

  auto c = find_case("naive");
  const double coupled = compute_reference(c, eps, 1e-7)[0];
  EXPECT_LT(std::abs(coupled - accurate), 1e-9);
  EXPECT_LT(std::abs(coupled - naive_exact(T, 1, 2, eps)), 3e-9);
}

TEST(Reference, CacheIsTransparent) {
  auto c = find_case("enzyme");
  clear_reference_cache();
  const Vector a = reference_solution(c, 1e-2, 1e-5);
  const Vector b = reference_solution(c, 1e-2, 1e-5);
  const Vector fresh = compute_reference(c, 1e-2, 1e-5);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, fresh);
}

TEST(Reference, EnzymeHalvingStable) {
  auto c = find_case("enzyme");
  const Vector a = reference_solution(c, 1e-2, c.reference_dt);
  const Vector b = compute_reference(c, 1e-2, c.reference_dt / 2);
  EXPECT_LT((a - b).norm(), 1e-10);
}

TEST(Reference, FrozenSlowField) {
  BenchmarkCase c = find_case("enzyme");
  c.system.f = [](const Vector& x, const Vector&) {
    return Vector::Zero(x.size()).eval();
  };
  c.name = "enzyme-frozen";
  EXPECT_EQ(compute_reference(c, 1e-2, 1e-4), c.x0);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<double> x = logspace(1e-4, 1e-1, 7), y;
  for (double v : x) y.push_back(v * v);
  auto fit = fit_loglog(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  EXPECT_EQ(fit.points, 7);
}

TEST(Fit, SkipsUnusablePoints) {
  auto fit = fit_loglog({1, 10, 100, 1000}, {0.0, 10, NAN, 1000});
  EXPECT_EQ(fit.points, 2);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_TRUE(std::isnan(fit_loglog({1.0}, {1.0}).slope));
}

TEST(Sweep, InjectedErrorModel) {
  auto report = run_sweep(
      {0, 1}, logspace(1e-4, 1e-2, 6),
      [](int k, double eps) {
        return CellOutcome{std::pow(eps, k + 2), 0, 0.0};
      },
      3);
  ASSERT_EQ(report.rows.size(), 12u);
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    EXPECT_TRUE(a.k < b.k || (a.k == b.k && a.axis_value < b.axis_value));
  }
  ASSERT_NE(report.fit_for(0), nullptr);
  EXPECT_NEAR(report.fit_for(0)->slope, 2.0, 1e-12);
  EXPECT_NEAR(report.fit_for(1)->slope, 3.0, 1e-12);
  EXPECT_NEAR(report.fit_for(0)->r2, 1.0, 1e-12);
}

TEST(Sweep, FailingCellIsRecorded) {
  auto report = run_sweep({0}, {1.0, 2.0, 3.0}, [](int, double v) {
    if (v == 2.0) throw NumericalFailure("boom");
    return CellOutcome{v, 1, 0.0};
  });
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[1].status, "nan-failure");
  EXPECT_EQ(report.rows[0].status, "ok");
  EXPECT_EQ(report.fit_for(0)->points, 2);
}

TEST(Sweep, GridValidation) {
  auto c = find_case("naive");
  EXPECT_THROW(convergence_sweep(c, {0}, SweepAxis::kEpsilon, {1e-3, 2e-3},
                                 c.defaults),
               ConfigError);
  EXPECT_THROW(convergence_sweep(c, {0}, SweepAxis::kEpsilon,
                                 {1e-3, 2e-3, 5e-3}, c.defaults),
               ConfigError);
}

TEST(Sweep, NaiveModelingOrder) {
  auto c = find_case("naive");
  DriverConfig base = c.defaults;
  base.T = 1.0;
  SweepOptions opts;
  opts.jobs = 2;
  auto report = convergence_sweep(c, {0, 1}, SweepAxis::kEpsilon,
                                  logspace(1e-4, 1e-2, 5), base, opts);
  for (const auto& row : report.rows) EXPECT_EQ(row.status, "ok");
  EXPECT_NEAR(report.fit_for(0)->slope, 1.0, 0.2);
  EXPECT_NEAR(report.fit_for(1)->slope, 2.0, 0.2);
}

TEST(Registry, AllCasesRunAtDefaults) {
  for (const auto& c : registry()) {
    for (int k = 0; k <= 2; ++k) {
      DriverConfig cfg = c.defaults;
      cfg.manifold.k = k;
      SimulationResult r;
      ASSERT_NO_THROW(r = simulate(c.system, c.x0, c.y0, cfg))
          << c.name << " k=" << k;
      EXPECT_TRUE(r.x_final.allFinite()) << c.name << " k=" << k;
    }
  }
}

TEST(Logspace, Endpoints) {
  auto g = logspace(1e-4, 1e-2, 8);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.front(), 1e-4);
  EXPECT_EQ(g.back(), 1e-2);
}

}  // namespace
}  // namespace mshom
