#include <gtest/gtest.h>

#include <cmath>

#include "frachj/error.hpp"
#include "frachj/exact.hpp"
#include "frachj/solver.hpp"

using namespace frachj;

namespace {

Problem zero_hamiltonian(std::function<double(const Point&)> u0) {
  Problem p;
  p.name = "zero";
  p.hamiltonian = [](const Point&, std::span<const double>) { return 0.0; };
  p.lipschitz_bound = 1.0;
  p.initial = std::move(u0);
  p.boundary = BoundaryMode::periodic;
  return p;
}

// upwind so that a zero Hamiltonian also means zero flux
SchemeOptions zero_flux_opts(double alpha, double dt, double h) {
  SchemeOptions o;
  o.alpha = alpha;
  o.dt = dt;
  o.h = h;
  o.flavor = FluxFlavor::upwind_nonincreasing;
  return o;
}

SchemeOptions opts(double alpha, double dt, double h) {
  SchemeOptions o;
  o.alpha = alpha;
  o.dt = dt;
  o.h = h;
  return o;
}

}  // namespace

TEST(Solve, ZeroHorizonReturnsInitialCondition) {
  const Problem p = test1_problem(0.7);
  const History h = solve(p, opts(0.7, 1e-3, 0.1), 0.0);
  ASSERT_EQ(h.levels.size(), 1u);
  for (std::size_t k = 0; k < h.levels[0].size(); ++k) {
    EXPECT_EQ(h.levels[0][k], p.initial(h.spec.node(k)));
  }
}

TEST(Solve, ZeroHamiltonianKeepsConstantData) {
  const History h = solve(zero_hamiltonian([](const Point&) { return 2.5; }), zero_flux_opts(0.4, 0.005, 0.5), 0.5);
  for (const auto& level : h.levels) {
    for (double v : level.values()) EXPECT_NEAR(v, 2.5, 1e-14);
  }
}

TEST(Solve, ZeroHamiltonianIsTheWeightedHistory) {
  const Problem p = zero_hamiltonian([](const Point& x) { return std::sin(x[0]); });
  const SchemeOptions o = zero_flux_opts(0.5, 0.01, 0.5);
  const History h = solve(p, o, 0.1);
  for (std::size_t n = 0; n + 1 < h.levels.size(); ++n) {
    const CaputoWeights w = weights(0.5, n, 0.01);
    for (std::size_t k = 0; k < h.levels[n].size(); ++k) {
      long double s = 0.0L;
      for (std::size_t m = 0; m <= n; ++m) s += w.c[m] * h.levels[m][k];
      EXPECT_NEAR(h.levels[n + 1][k], static_cast<double>(s), 1e-14);
    }
  }
}

TEST(Step, FirstLevelSubtractsOneFlux) {
  const Scheme scheme(test2_problem(0.6), opts(0.6, 1e-3, 0.1));
  const History h = solve(scheme, 1e-3);
  const auto g = scheme.fluxes(h.levels[0], 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(h.levels[1][k], h.levels[0][k] - scheme.rho() * g[k]);
  }
}

TEST(Step, ClassicalLaxFriedrichsByHand) {
  // α = 1, nodes x = −0.1, 0, 0.1, u₀ = −x², ghosts −0.04 at x = ±0.2
  Problem p = test2_problem(1.0, 1, BoundaryMode::dirichlet_from_exact, -0.1, 0.1);
  const History h = solve(p, opts(1.0, 0.01, 0.1), 0.01);
  ASSERT_EQ(h.levels.size(), 2u);
  EXPECT_NEAR(h.levels[1][0], -0.022, 1e-15);
  EXPECT_NEAR(h.levels[1][1], -0.01, 1e-15);
  EXPECT_NEAR(h.levels[1][2], -0.022, 1e-15);
}

TEST(Scheme, CflViolationIsFatalUnlessOverridden) {
  EXPECT_THROW(
      {
        try {
          Scheme(test1_problem(0.5), opts(0.5, 0.05, 0.1));
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::cfl_violation);
          throw;
        }
      },
      Error);
  SchemeOptions o = opts(0.5, 0.05, 0.1);
  o.allow_unstable = true;
  EXPECT_NO_THROW(Scheme(test1_problem(0.5), o));
}

TEST(Scheme, NonFiniteValuesAreReported) {
  SchemeOptions o = opts(0.5, 0.05, 0.1);
  o.allow_unstable = true;
  try {
    solve(test1_problem(0.5), o, 5.0);
    FAIL() << "expected a numerical error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(StepCount, RequiresIntegralRatio) {
  EXPECT_EQ(step_count(0.2, 1e-3), 200u);
  EXPECT_EQ(step_count(0.0, 1e-3), 0u);
  EXPECT_THROW(step_count(0.2, 3e-3), Error);
}

TEST(Stability, BoundHoldsEveryStep) {
  for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
    std::vector<StepReport> reports;
    const Problem p = test2_problem(alpha);
    SchemeOptions o = opts(alpha, 0, 0.1);
    o.dt = 0.2 / std::ceil(0.2 / suggest_dt(o.flavor, alpha, 0.1, 1.0, default_theta(alpha)));
    solve(p, o, 0.2, &reports);
    ASSERT_FALSE(reports.empty());
    for (const auto& r : reports) {
      ASSERT_TRUE(r.bound_satisfied) << "alpha " << alpha << " step " << r.n;
      ASSERT_LE(r.distance_from_initial, r.stability_bound * (1.0 + 1e-9) + 1e-9);
    }
  }
}

TEST(Determinism, ThreadCountDoesNotChangeBits) {
  SchemeOptions o = opts(0.8, 1e-3, 0.1);
  const Problem p = test1_problem(0.8, 2);
  const History a = solve(p, o, 0.01);
  o.threads = 3;
  const History b = solve(p, o, 0.01);
  for (std::size_t n = 0; n < a.levels.size(); ++n) {
    for (std::size_t k = 0; k < a.levels[n].size(); ++k) ASSERT_EQ(a.levels[n][k], b.levels[n][k]);
  }
}

TEST(GProperties, AllHoldUnderCfl) {
  for (double alpha : {0.3, 0.7, 1.0}) {
    const SchemeOptions o = opts(alpha, suggest_dt(FluxFlavor::lax_friedrichs, alpha, 0.1, 2.0,
                                                   default_theta(alpha)),
                                 0.1);
    const GPropertyReport r = verify_g_properties(test1_problem(alpha), o, 500, 11);
    EXPECT_TRUE(r.all_passed()) << "alpha " << alpha;
    ASSERT_NE(r.find("monotone_ordered_inputs"), nullptr);
    EXPECT_EQ(r.find("monotone_ordered_inputs")->trials, 500u);
    EXPECT_TRUE(r.find("gradient_bound")->skipped);
  }
}

TEST(GProperties, GradientBoundForSpatiallyVaryingHamiltonian) {
  Problem p = test2_problem(0.6);
  p.hamiltonian = [](const Point& x, std::span<const double> q) {
    return std::abs(q[0]) * (1.0 + 0.5 * std::sin(x[0]));
  };
  p.lipschitz_bound = 1.5;
  p.x_dependent = true;
  p.spatial_lipschitz = 0.5;
  const SchemeOptions o = opts(0.6, suggest_dt(FluxFlavor::lax_friedrichs, 0.6, 0.1, 1.5, default_theta(0.6)), 0.1);
  const GPropertyReport r = verify_g_properties(p, o, 200, 5);
  const PropertyCheck* c = r.find("gradient_bound");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->skipped);
  EXPECT_TRUE(c->passed);
  EXPECT_TRUE(r.all_passed());
}

TEST(GProperties, ReproducibleForFixedSeed) {
  const SchemeOptions o = opts(0.5, 1e-3, 0.1);
  const GPropertyReport a = verify_g_properties(test2_problem(0.5), o, 50, 99);
  const GPropertyReport b = verify_g_properties(test2_problem(0.5), o, 50, 99);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].worst_slack, b.checks[i].worst_slack);
  }
}

TEST(GProperties, MonotonicityBreaksFarBeyondCfl) {
  SchemeOptions o = opts(0.5, 0.0, 0.1);
  o.dt = 50.0 * suggest_dt(FluxFlavor::lax_friedrichs, 0.5, 0.1, 2.0, default_theta(0.5));
  o.allow_unstable = true;
  const GPropertyReport r = verify_g_properties(test1_problem(0.5), o, 200, 3);
  EXPECT_GT(r.find("monotone_ordered_inputs")->failures, 0u);
}
