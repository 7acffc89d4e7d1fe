#pragma once

#include <cstddef>

#include "frachj/grid.hpp"
#include "frachj/solver.hpp"
#include "frachj/special.hpp"

namespace frachj {

inline constexpr std::size_t kDefaultSeriesTerms = 400;

/// Coefficients of f(t) = Σ fₙ t^{αn} solving ∂ᵅf + 2f² = 0, f(0) = 1:
///   fₙ = −(2/βₙ) Σ_{i+j=n−1} fᵢ fⱼ,  βₙ = Γ(αn+1)/Γ(α(n−1)+1).
/// Stored with a power-of-two variable scale near the radius in t^α.
PowerSeries f_coefficients(double alpha, std::size_t n_terms);

/// Convergence radius T_α of the f series in t (n_terms ≥ 100).
double critical_time(double alpha, std::size_t n_terms = kDefaultSeriesTerms);

/// u(t, x) = min{0, |x|² f(t) − 1}, valid for t ≤ 0.95·T_α.
class Test1Solution {
 public:
  explicit Test1Solution(double alpha, int dim = 1, std::size_t n_terms = kDefaultSeriesTerms);

  double alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  const PowerSeries& f() const noexcept { return f_; }
  double critical_time() const noexcept { return critical_time_; }
  /// Largest t accepted by the evaluators.
  double max_time() const noexcept { return 0.95 * critical_time_; }

  double f_value(double t) const;
  double operator()(double t, const Point& x) const;

  /// |∂ᵅf + 2f²| for the series truncated to `n_terms` (0 = all terms),
  /// differentiated term by term with ∂ᵅ t^{αn} = βₙ t^{α(n−1)}.
  double residual(double t, std::size_t n_terms = 0) const;

 private:
  void check_time(double t) const;

  double alpha_;
  int dim_;
  PowerSeries f_;
  std::vector<double> beta_;  // βₙ for n ≥ 1; beta_[0] unused
  double critical_time_;
};

/// u(t, x) = −|x|² − t^{2α}/(αΓ(2α)) − 2tᵅ|x|/(αΓ(α)).
class Test2Solution {
 public:
  explicit Test2Solution(double alpha, int dim = 1);

  double alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  double operator()(double t, const Point& x) const;

 private:
  double alpha_;
  int dim_;
  double c_quadratic_;  // 1/(αΓ(2α))
  double c_linear_;     // 2/(αΓ(α))
};

/// α = 1 closed forms.
double test1_classical(double t, const Point& x, int dim = 1);
double test2_classical(double t, const Point& x, int dim = 1);

/// ∂ᵅu + |Du|²/2 = 0, u₀ = min{0, |x|² − 1}. L = 2 on the gradient range |p| ≤ 2
/// of the exact solution.
Problem test1_problem(double alpha, int dim = 1,
                      BoundaryMode boundary = BoundaryMode::dirichlet_frozen,
                      double box_lo = -2.0, double box_hi = 2.0);

/// ∂ᵅu + |Du| = 0, u₀ = −|x|², L = 1.
Problem test2_problem(double alpha, int dim = 1,
                      BoundaryMode boundary = BoundaryMode::dirichlet_from_exact,
                      double box_lo = -2.0, double box_hi = 2.0);

}  // namespace frachj
