#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "frachj/grid.hpp"

namespace frachj {

/// H(x, p) with p of length dim.
using HamiltonianFn = std::function<double(const Point& x, std::span<const double> p)>;

enum class FluxFlavor {
  upwind_nonincreasing,  // g = H(x, forward differences); needs H nonincreasing in each pₖ
  upwind_nondecreasing,  // g = H(x, backward differences); needs H nondecreasing in each pₖ
  lax_friedrichs,
};

const char* to_string(FluxFlavor flavor) noexcept;
FluxFlavor parse_flux_flavor(const std::string& name);

/// Default Lax-Friedrichs viscosity, the upper end 1 − 2^{−α} of the CFL window.
double default_theta(double alpha);

/// Monotone numerical Hamiltonian g(x, q₁, …, q_{2d}).
///
/// `lipschitz_bound` bounds |∂H/∂pₖ| for every axis k over the gradient range
/// the solution is expected to visit; it only feeds the CFL check.
struct NumericalHamiltonian {
  FluxFlavor flavor = FluxFlavor::lax_friedrichs;
  HamiltonianFn hamiltonian;
  double lipschitz_bound = 1.0;
  double theta = 0.5;
  int dim = 1;

  void validate() const;
};

/// g at one node. `q` is the DiscreteGradient entry (2·dim values) and
/// `lambda` = ρ_α/h scales the Lax-Friedrichs viscosity:
///
///   g = H(x, ((q_fwd + q_bwd)/2)ₖ) − (θ/d) Σₖ (q_fwd − q_bwd)ₖ / λ
///
/// which is the one-dimensional flux at d = 1.
double flux_eval(const NumericalHamiltonian& g, const Point& x, std::span<const double> q,
                 double lambda);

struct CflReport {
  FluxFlavor flavor = FluxFlavor::lax_friedrichs;
  double alpha = 1.0;
  double dt = 0.0;
  double h = 0.0;
  double lipschitz_bound = 0.0;
  int dim = 1;
  double theta = 0.0;
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Lax-Friedrichs only: admissible [lower, upper] for θ.
  std::optional<std::pair<double, double>> theta_window;
};

/// Upwind:  (Δtᵅ/h)·d·L ≤ (2 − 2^{1−α})/Γ(2−α).
/// LF:      d·Γ(2−α)Δtᵅ·L/(2h) ≤ θ ≤ 1 − 2^{−α}.
/// At d = 1 these are the textbook fractional conditions, and at α = 1 the
/// classical ones.
CflReport cfl_check(FluxFlavor flavor, double alpha, double dt, double h, double lipschitz_bound,
                    double theta, int dim = 1);

/// 0.95 × the largest Δt that satisfies the CFL condition.
double suggest_dt(FluxFlavor flavor, double alpha, double h, double lipschitz_bound,
                  double theta, int dim = 1);

/// Samples H along each axis on [−p_max, p_max] and reports whether its
/// monotonicity contradicts an upwind flavor. Empty when consistent.
std::optional<std::string> upwind_flavor_warning(const NumericalHamiltonian& g, double p_max);

}  // namespace frachj
