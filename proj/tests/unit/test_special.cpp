#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "frachj/error.hpp"
#include "frachj/special.hpp"

using namespace frachj;

TEST(Gamma, MatchesStdTgamma) {
  for (double x : {0.1, 0.5, 0.9, 1.3, 2.5, 3.7, 10.2, 40.5, 150.3}) {
    EXPECT_NEAR(frachj::gamma(x) / std::tgamma(x), 1.0, 1e-13) << "x = " << x;
  }
}

TEST(Gamma, IntegersAreExactFactorials) {
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    EXPECT_EQ(frachj::gamma(static_cast<double>(n)), fact);
    fact *= n;
  }
}

TEST(Gamma, HalfIsSqrtPi) { EXPECT_NEAR(frachj::gamma(0.5), std::sqrt(M_PI), 1e-15); }

TEST(Gamma, RejectsOutOfDomain) {
  EXPECT_THROW(frachj::gamma(0.0), Error);
  EXPECT_THROW(frachj::gamma(-1.5), Error);
  EXPECT_THROW(frachj::gamma(200.0), Error);
  EXPECT_THROW(frachj::gamma(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST(LogGamma, MatchesStdLgammaFarBeyondOverflow) {
  for (double x : {0.2, 1.5, 30.0, 171.5, 400.7}) {
    EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-12 * (1.0 + std::abs(std::lgamma(x))));
  }
}

TEST(SeriesEval, GeometricSeries) {
  PowerSeries s;
  s.coefficients.assign(200, 1.0);
  s.exponent_step = 1.0;
  EXPECT_NEAR(series_eval(s, 0.5, 200), 2.0, 1e-15);
  EXPECT_EQ(series_eval(s, 0.0, 200), 1.0);
}

TEST(SeriesEval, HonoursScaleAndExponent) {
  // coefficients (1, 1) in s = t^0.5 / 4: f = 1 + sqrt(t)/4
  PowerSeries s{{1.0, 1.0}, 0.5, 4.0};
  EXPECT_NEAR(series_eval(s, 0.25, 2), 1.125, 1e-15);
  EXPECT_DOUBLE_EQ(s.coefficient(1), 0.25);
}

TEST(SeriesEval, RejectsBadArguments) {
  PowerSeries s{{1.0, 2.0}, 1.0, 1.0};
  EXPECT_THROW(series_eval(s, 0.1, 3), Error);
  EXPECT_THROW(series_eval(s, 0.1, 0), Error);
  EXPECT_THROW(series_eval(s, -0.1, 2), Error);
  EXPECT_THROW(series_eval(PowerSeries{}, 0.1, 1), Error);
}

TEST(RadiusEstimate, Geometric) {
  PowerSeries s;
  for (int n = 0; n < 200; ++n) s.coefficients.push_back(std::pow(-2.0, n));
  EXPECT_NEAR(radius_estimate(s, 50), 0.5, 1e-12);
}

TEST(RadiusEstimate, AlgebraicPrefactorConverges) {
  // c_n = (n+1) 3^n has radius 1/3
  PowerSeries s;
  for (int n = 0; n < 400; ++n) s.coefficients.push_back((n + 1) * std::pow(3.0, n) / 1e150);
  EXPECT_NEAR(radius_estimate(s, 50), 1.0 / 3.0, 0.02 / 3.0);
}

TEST(RadiusEstimate, PolynomialAndFactorialDecayAreInfinite) {
  PowerSeries poly;
  poly.coefficients.assign(100, 0.0);
  poly.coefficients[0] = 1.0;
  EXPECT_TRUE(std::isinf(radius_estimate(poly, 20)));

  PowerSeries exp_series;
  double c = 1.0;
  for (int n = 0; n < 120; ++n) {
    exp_series.coefficients.push_back(c);
    c /= (n + 1);
  }
  EXPECT_TRUE(std::isinf(radius_estimate(exp_series, 40)));
}

TEST(RadiusEstimate, Errors) {
  PowerSeries zero;
  zero.coefficients.assign(100, 0.0);
  EXPECT_THROW(radius_estimate(zero, 20), Error);
  PowerSeries short_series{{1.0, 1.0}, 1.0, 1.0};
  EXPECT_THROW(radius_estimate(short_series, 20), Error);
}
