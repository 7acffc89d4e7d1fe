#include "frachj/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "frachj/error.hpp"

namespace frachj {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

void require_positive_finite(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw Error(ErrorKind::domain,
                std::string(fn) + ": argument must be positive and finite, got " +
                    std::to_string(x));
  }
}

}  // namespace

double gamma(double x) {
  require_positive_finite(x, "gamma");
  if (x > 171.0) {
    throw Error(ErrorKind::domain, "gamma: argument above 171 overflows");
  }
  if (x == std::floor(x)) {
    double f = 1.0;
    for (double k = 2.0; k < x; k += 1.0) f *= k;
    return f;
  }
  if (x < 0.5) {
    // Γ(x)Γ(1−x) = π / sin(πx)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  // split the power so t^{x-1/2} does not overflow before e^{-t} pulls it back
  const double half_pow = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) *
         lanczos_sum(xm1);
}

double log_gamma(double x) {
  require_positive_finite(x, "log_gamma");
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
           log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(xm1));
}

double PowerSeries::coefficient(std::size_t n) const {
  if (n >= coefficients.size()) {
    throw Error(ErrorKind::length_mismatch, "PowerSeries::coefficient: index out of range");
  }
  return coefficients[n] / std::pow(variable_scale, static_cast<double>(n));
}

double series_eval(const PowerSeries& s, double t, std::size_t n_terms) {
  if (s.coefficients.empty()) {
    throw Error(ErrorKind::degenerate, "series_eval: empty coefficient list");
  }
  if (n_terms == 0 || n_terms > s.coefficients.size()) {
    throw Error(ErrorKind::length_mismatch,
                "series_eval: n_terms must be in [1, " +
                    std::to_string(s.coefficients.size()) + "]");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::domain, "series_eval: t must be nonnegative and finite");
  }
  if (t == 0.0) return s.coefficients.front();

  const long double var =
      static_cast<long double>(std::pow(t, s.exponent_step)) / s.variable_scale;
  long double power = 1.0L;
  long double acc = 0.0L;
  for (std::size_t n = 0; n < n_terms; ++n) {
    acc += static_cast<long double>(s.coefficients[n]) * power;
    power *= var;
  }
  return static_cast<double>(acc);
}

double radius_estimate(const PowerSeries& s, std::size_t window) {
  const auto& c = s.coefficients;
  const std::size_t n = c.size();
  if (window == 0 || n < 2 * window) {
    throw Error(ErrorKind::length_mismatch,
                "radius_estimate: need at least 2*window coefficients");
  }
  if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorKind::degenerate, "radius_estimate: all coefficients are zero");
  }
  const auto tail_begin = c.begin() + static_cast<std::ptrdiff_t>(n - window);
  if (std::all_of(tail_begin, c.end(), [](double v) { return v == 0.0; })) {
    return std::numeric_limits<double>::infinity();  // polynomial
  }

  // max over [lo, n) of (|c_k| / |c_{k-lag}|)^{1/lag}; negative if no usable pair
  auto windowed_rate = [&](std::size_t lo, std::size_t hi, std::size_t lag) {
    double best = -1.0;
    for (std::size_t k = lo; k < hi; ++k) {
      if (c[k] == 0.0 || c[k - lag] == 0.0) continue;
      const double r = std::exp((std::log(std::abs(c[k])) - std::log(std::abs(c[k - lag]))) /
                                static_cast<double>(lag));
      best = std::max(best, r);
    }
    return best;
  };

  double rate = windowed_rate(n - window, n, window);
  if (rate < 0.0) {
    // sparse pattern: fall back to the plain root test on the tail
    for (std::size_t k = n - window; k < n; ++k) {
      if (c[k] != 0.0) {
        rate = std::max(rate, std::pow(std::abs(c[k]), 1.0 / static_cast<double>(k)));
      }
    }
  }

  const std::size_t half = std::max<std::size_t>(window / 2, 1);
  const double late = windowed_rate(n - half, n, half);
  const double early = windowed_rate(n - window, n - half, half);
  if (late > 0.0 && early > 0.0 && late < 0.9 * early) {
    return std::numeric_limits<double>::infinity();
  }
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();

  // radius in s = t^α / scale, mapped back to t
  const double radius_in_s = s.variable_scale / rate;
  return std::pow(radius_in_s, 1.0 / s.exponent_step);
}

}  // namespace frachj
