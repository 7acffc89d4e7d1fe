#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frachj/caputo.hpp"
#include "frachj/error.hpp"

using namespace frachj;

namespace {

// Weights straight from the definition in long double.
long double naive_weight(double alpha, std::size_t n, std::size_t m) {
  const long double p = 1.0L - alpha;
  auto pw = [&](long double k) { return k == 0.0L ? 0.0L : std::pow(k, p); };
  const auto k = static_cast<long double>(n - m);
  if (m == 0) return pw(n + 1.0L) - pw(static_cast<long double>(n));
  return 2.0L * pw(k + 1.0L) - pw(k + 2.0L) - pw(k);
}

}  // namespace

TEST(Weights, MatchNaiveFormula) {
  for (double alpha : {0.1, 0.37, 0.5, 0.9, 1.0}) {
    for (std::size_t n : {0u, 1u, 2u, 7u, 100u, 1000u}) {
      const CaputoWeights w = weights(alpha, n, 0.01);
      ASSERT_EQ(w.c.size(), n + 1);
      for (std::size_t m = 0; m <= n; ++m) {
        EXPECT_NEAR(w.c[m], static_cast<double>(naive_weight(alpha, n, m)), 1e-14)
            << "alpha " << alpha << " n " << n << " m " << m;
      }
    }
  }
}

TEST(Weights, FirstLevelAndLastWeight) {
  EXPECT_EQ(weights(0.4, 0, 0.1).c, std::vector<double>{1.0});
  for (double alpha : {0.2, 0.6, 1.0}) {
    const CaputoWeights w = weights(alpha, 12, 0.1);
    EXPECT_NEAR(w.c.back(), 2.0 - std::pow(2.0, 1.0 - alpha), 1e-15);
  }
}

TEST(Weights, AlphaOneIsBackwardDifference) {
  const CaputoWeights w = weights(1.0, 5, 0.1);
  for (std::size_t m = 0; m < 5; ++m) EXPECT_EQ(w.c[m], 0.0);
  EXPECT_EQ(w.c[5], 1.0);
  EXPECT_EQ(w.rho, 0.1);
}

TEST(Weights, RhoIsGammaTimesDtPower) {
  EXPECT_NEAR(rho_alpha(0.5, 0.01), std::tgamma(1.5) * 0.1, 1e-16);
}

TEST(Weights, RejectsBadAlpha) {
  EXPECT_THROW(weights(0.0, 3, 0.1), Error);
  EXPECT_THROW(weights(1.2, 3, 0.1), Error);
  EXPECT_THROW(weights(0.5, 3, -0.1), Error);
}

TEST(WeightSequence, AgreesWithClosedForm) {
  WeightSequence seq(0.3, 0.02);
  for (std::size_t n = 0; n <= 300; ++n) {
    const CaputoWeights& w = seq.advance();
    ASSERT_EQ(w.n, n);
    const CaputoWeights ref = weights(0.3, n, 0.02);
    for (std::size_t m = 0; m <= n; ++m) ASSERT_EQ(w.c[m], ref.c[m]);
  }
}

TEST(CaputoApply, ExactOnLinearFunctions) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = ua(rng);
    const std::size_t steps = 10 + rng() % 200;
    const double dt = 0.5 / static_cast<double>(steps);
    std::vector<double> hist(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) hist[m] = 3.0 + 2.0 * static_cast<double>(m) * dt;
    const double t = static_cast<double>(steps) * dt;
    const double expect = 2.0 * std::pow(t, 1.0 - alpha) / std::tgamma(2.0 - alpha);
    EXPECT_NEAR(caputo_apply(weights(alpha, steps - 1, dt), hist), expect, 1e-11 * (1.0 + expect));
  }
}

TEST(CaputoApply, LengthMismatch) {
  const std::vector<double> hist{0.0, 1.0};
  EXPECT_THROW(caputo_apply(weights(0.5, 3, 0.1), hist), Error);
}

TEST(TruncationOrder, QuadraticGivesTwoMinusAlpha) {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const TruncationResult r = truncation_order(alpha, monomial(2));
    EXPECT_FALSE(r.exact);
    EXPECT_NEAR(r.order, 2.0 - alpha, 0.15);
    // independent reference value of the derivative
    EXPECT_NEAR(monomial(2).derivative(1.0, alpha), 2.0 / std::tgamma(3.0 - alpha), 1e-14);
  }
}

TEST(TruncationOrder, LinearIsFlaggedExact) {
  const TruncationResult r = truncation_order(0.6, monomial(1));
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(std::isnan(r.order));
}

TEST(TruncationOrder, AlphaOneIsFirstOrderOnCubic) {
  const TruncationResult r = truncation_order(1.0, monomial(3));
  EXPECT_NEAR(r.order, 1.0, 0.05);
}
