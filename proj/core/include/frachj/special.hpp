#pragma once

#include <cstddef>
#include <vector>

namespace frachj {

/// Gamma function for 0 < x <= 171. Positive integers are returned as exact
/// factorials; everything else goes through a Lanczos approximation
/// (g = 7, 9 terms) with reflection below 1/2.
double gamma(double x);

/// log Γ(x) for x > 0, usable far beyond the range where Γ itself overflows.
double log_gamma(double x);

/// Σ fₙ t^{α n}, stored in the rescaled variable s = t^α / variable_scale:
///   f(t) = Σ coefficients[n] · sⁿ,  fₙ = coefficients[n] / variable_scaleⁿ.
/// variable_scale is 1 unless a producer needs it to keep coefficients in
/// floating-point range; keep it a power of two so the rescaling is exact.
struct PowerSeries {
  std::vector<double> coefficients;
  double exponent_step = 1.0;
  double variable_scale = 1.0;

  std::size_t size() const noexcept { return coefficients.size(); }

  /// fₙ in the original t^{αn} basis (may overflow for large n).
  double coefficient(std::size_t n) const;
};

/// Partial sum over the first n_terms coefficients.
double series_eval(const PowerSeries& s, double t, std::size_t n_terms);

/// Convergence radius in t estimated from the trailing coefficients.
/// Returns +infinity for polynomials and super-geometric decay.
double radius_estimate(const PowerSeries& s, std::size_t window);

}  // namespace frachj
