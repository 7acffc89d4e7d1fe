#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frachj/caputo.hpp"
#include "frachj/grid.hpp"
#include "frachj/hamiltonian.hpp"

namespace frachj {

/// ∂ₜᵅu + H(x, Du) = 0 on a box (or torus) with initial datum u₀.
struct Problem {
  std::string name;
  int dim = 1;
  HamiltonianFn hamiltonian;
  /// L: bound on |∂H/∂pₖ| for |p| ≤ gradient_radius.
  double lipschitz_bound = 1.0;
  /// Gradient range over which `lipschitz_bound` is valid (∞ if global).
  double gradient_radius = std::numeric_limits<double>::infinity();
  std::function<double(const Point&)> initial;
  double box_lo = -2.0;
  double box_hi = 2.0;
  BoundaryMode boundary = BoundaryMode::periodic;
  /// Exact solution u(t, x); required for dirichlet_from_exact.
  std::function<double(double, const Point&)> exact;
  /// H depends on x; `spatial_lipschitz` is then the constant C of the
  /// growth condition |∂g/∂x| ≤ C(1 + Σ|qₖ|).
  bool x_dependent = false;
  std::optional<double> spatial_lipschitz;

  void validate() const;
};

struct SchemeOptions {
  double alpha = 1.0;
  double dt = 1e-3;
  double h = 0.1;
  FluxFlavor flavor = FluxFlavor::lax_friedrichs;
  std::optional<double> theta;  // defaults to 1 − 2^{−α}
  bool allow_unstable = false;
  unsigned threads = 1;
};

/// U⁰ … Uⁿ, all on one grid; append-only.
struct History {
  GridSpec spec;
  double dt = 0.0;
  double alpha = 1.0;
  std::vector<GridFunction> levels;

  std::size_t last_level() const noexcept { return levels.size() - 1; }
  void append(GridFunction u);
};

struct StepReport {
  std::size_t n = 0;                   // produced level n+1 from levels 0..n
  double increment = 0.0;              // ‖Uⁿ⁺¹ − Uⁿ‖∞
  double distance_from_initial = 0.0;  // ‖Uⁿ⁺¹ − U⁰‖∞
  double flux_sup = 0.0;               // K: running sup |g| over levels 0..n
  double stability_bound = 0.0;        // K Γ(2−α)/(α(1−α)) ((n+1)Δt)^α; K (n+1)Δt at α = 1
  bool bound_satisfied = true;
  double gradient_range = 0.0;         // max |D_h Uⁿ| entry
  bool gradient_range_exceeded = false;
};

/// Output of Gⁿ on one history.
struct GMapResult {
  std::vector<double> values;
  double flux_sup = 0.0;
  double gradient_range = 0.0;
};

/// The explicit scheme Uⁿ⁺¹ = Gⁿ(U⁰…Uⁿ) = Σ cₘⁿ⁺¹ Uᵐ − ρ_α g(x, [D_h Uⁿ]).
/// Construction validates the problem and checks CFL; a violation throws
/// unless `allow_unstable` is set.
class Scheme {
 public:
  Scheme(Problem problem, SchemeOptions options);

  const Problem& problem() const noexcept { return problem_; }
  const SchemeOptions& options() const noexcept { return options_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const NumericalHamiltonian& numerical_hamiltonian() const noexcept { return flux_; }
  const CflReport& cfl() const noexcept { return cfl_; }
  double rho() const noexcept { return rho_; }
  double lambda() const noexcept { return rho_ / grid_.h; }

  GridFunction initial_condition() const;
  /// Ghost values at time t; empty for periodic grids.
  GhostProvider ghost_at(double t) const;

  /// g at every node of `u`, with ghosts taken at time t.
  std::vector<double> fluxes(const GridFunction& u, double t) const;

  /// Gⁿ applied to levels[0..n] with n = w.n.
  GMapResult g_map(std::span<const GridFunction> levels, const CaputoWeights& w) const;

 private:
  Problem problem_;
  SchemeOptions options_;
  GridSpec grid_;
  NumericalHamiltonian flux_;
  CflReport cfl_;
  double rho_ = 0.0;
};

/// One application of the scheme. `prior_flux_sup` is K over earlier levels.
std::pair<GridFunction, StepReport> step(const History& history, const Scheme& scheme,
                                         const CaputoWeights& w, double prior_flux_sup = 0.0);

/// Runs N = T/Δt steps (T/Δt must be integral to 1e-9 relative).
History solve(const Scheme& scheme, double T, std::vector<StepReport>* reports = nullptr);
History solve(const Problem& problem, const SchemeOptions& options, double T,
              std::vector<StepReport>* reports = nullptr);

/// Number of steps for horizon T, or throws if T/Δt is not an integer.
std::size_t step_count(double T, double dt);

struct PropertyCheck {
  std::string name;
  bool passed = true;
  bool skipped = false;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();  // min(bound − observed)
  std::string note;
};

struct GPropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const noexcept;
  const PropertyCheck* find(const std::string& name) const noexcept;
};

/// Randomised checks of the Gⁿ-map properties on the periodic version of
/// `problem`: commutation with constants, sup-norm nonexpansiveness,
/// ordered-input monotonicity, the gradient bound (x-dependent H only), the
/// time-increment bound and the sup bound.
GPropertyReport verify_g_properties(const Problem& problem, const SchemeOptions& options,
                                    std::size_t trials, std::uint64_t seed);

}  // namespace frachj
