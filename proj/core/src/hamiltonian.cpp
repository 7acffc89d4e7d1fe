#include "frachj/hamiltonian.hpp"

#include <array>
#include <cmath>

#include "frachj/error.hpp"
#include "frachj/special.hpp"

namespace frachj {

const char* to_string(FluxFlavor flavor) noexcept {
  switch (flavor) {
    case FluxFlavor::upwind_nonincreasing: return "upwind_nonincreasing";
    case FluxFlavor::upwind_nondecreasing: return "upwind_nondecreasing";
    case FluxFlavor::lax_friedrichs: return "lax_friedrichs";
  }
  return "unknown";
}

FluxFlavor parse_flux_flavor(const std::string& name) {
  if (name == "lax_friedrichs" || name == "lf") return FluxFlavor::lax_friedrichs;
  if (name == "upwind_nonincreasing" || name == "upwind+" || name == "upwind") {
    return FluxFlavor::upwind_nonincreasing;
  }
  if (name == "upwind_nondecreasing" || name == "upwind-") return FluxFlavor::upwind_nondecreasing;
  throw Error(ErrorKind::configuration, "unknown scheme '" + name + "'");
}

double default_theta(double alpha) { return 1.0 - std::pow(2.0, -alpha); }

void NumericalHamiltonian::validate() const {
  if (!hamiltonian) throw Error(ErrorKind::configuration, "numerical Hamiltonian has no H");
  if (!(lipschitz_bound > 0.0) || !std::isfinite(lipschitz_bound)) {
    throw Error(ErrorKind::configuration, "Lipschitz bound L must be positive and finite");
  }
  if (dim != 1 && dim != 2) throw Error(ErrorKind::configuration, "dim must be 1 or 2");
  if (flavor == FluxFlavor::lax_friedrichs && !(theta > 0.0)) {
    throw Error(ErrorKind::configuration, "Lax-Friedrichs theta must be positive");
  }
}

double flux_eval(const NumericalHamiltonian& g, const Point& x, std::span<const double> q,
                 double lambda) {
  const auto d = static_cast<std::size_t>(g.dim);
  if (q.size() != 2 * d) {
    throw Error(ErrorKind::length_mismatch, "flux_eval: expected 2*dim difference quotients");
  }
  std::array<double, 2> p{};
  switch (g.flavor) {
    case FluxFlavor::upwind_nonincreasing:
      for (std::size_t k = 0; k < d; ++k) p[k] = q[2 * k];
      return g.hamiltonian(x, std::span<const double>(p.data(), d));
    case FluxFlavor::upwind_nondecreasing:
      for (std::size_t k = 0; k < d; ++k) p[k] = q[2 * k + 1];
      return g.hamiltonian(x, std::span<const double>(p.data(), d));
    case FluxFlavor::lax_friedrichs: {
      double jump = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        p[k] = 0.5 * (q[2 * k] + q[2 * k + 1]);
        jump += q[2 * k] - q[2 * k + 1];
      }
      const double h_val = g.hamiltonian(x, std::span<const double>(p.data(), d));
      return h_val - (g.theta / static_cast<double>(d)) * jump / lambda;
    }
  }
  return 0.0;
}

namespace {

void check_cfl_inputs(double alpha, double h, double lipschitz_bound, int dim) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::domain, "alpha must lie in (0, 1]");
  if (!(h > 0.0)) throw Error(ErrorKind::domain, "h must be positive");
  if (!(lipschitz_bound > 0.0) || !std::isfinite(lipschitz_bound)) {
    throw Error(ErrorKind::domain, "L must be positive and finite");
  }
  if (dim != 1 && dim != 2) throw Error(ErrorKind::domain, "dim must be 1 or 2");
}

}  // namespace

CflReport cfl_check(FluxFlavor flavor, double alpha, double dt, double h, double lipschitz_bound,
                    double theta, int dim) {
  check_cfl_inputs(alpha, h, lipschitz_bound, dim);
  if (!(dt > 0.0)) throw Error(ErrorKind::domain, "dt must be positive");
  CflReport r;
  r.flavor = flavor;
  r.alpha = alpha;
  r.dt = dt;
  r.h = h;
  r.lipschitz_bound = lipschitz_bound;
  r.dim = dim;
  r.theta = theta;
  const double d = static_cast<double>(dim);
  const double dt_pow = std::pow(dt, alpha);
  if (flavor == FluxFlavor::lax_friedrichs) {
    const double lower = d * gamma(2.0 - alpha) * dt_pow * lipschitz_bound / (2.0 * h);
    const double upper = default_theta(alpha);
    r.lhs = lower;
    r.rhs = upper;
    r.theta_window = std::make_pair(lower, upper);
    r.satisfied = lower <= upper && lower <= theta && theta <= upper;
  } else {
    r.lhs = dt_pow * (d * lipschitz_bound) / h;
    r.rhs = (2.0 - std::pow(2.0, 1.0 - alpha)) / gamma(2.0 - alpha);
    r.satisfied = r.lhs <= r.rhs;
  }
  return r;
}

double suggest_dt(FluxFlavor flavor, double alpha, double h, double lipschitz_bound, double theta,
                  int dim) {
  check_cfl_inputs(alpha, h, lipschitz_bound, dim);
  const double d = static_cast<double>(dim);
  double dt_pow = 0.0;  // largest admissible Δtᵅ
  if (flavor == FluxFlavor::lax_friedrichs) {
    if (!(theta > 0.0) || theta > default_theta(alpha)) {
      throw Error(ErrorKind::cfl_infeasible,
                  "theta must lie in (0, 1 - 2^-alpha] for a non-empty CFL window");
    }
    dt_pow = 2.0 * h * theta / (d * gamma(2.0 - alpha) * lipschitz_bound);
  } else {
    dt_pow = (2.0 - std::pow(2.0, 1.0 - alpha)) / gamma(2.0 - alpha) * h / (d * lipschitz_bound);
  }
  const double dt = 0.95 * std::pow(dt_pow, 1.0 / alpha);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::cfl_infeasible, "no positive time step satisfies the CFL condition");
  }
  return dt;
}

std::optional<std::string> upwind_flavor_warning(const NumericalHamiltonian& g, double p_max) {
  if (g.flavor == FluxFlavor::lax_friedrichs) return std::nullopt;
  const bool want_nonincreasing = g.flavor == FluxFlavor::upwind_nonincreasing;
  const Point x{0.0, 0.0};
  constexpr int kSamples = 64;
  for (int axis = 0; axis < g.dim; ++axis) {
    std::array<double, 2> p{};
    double prev = 0.0;
    for (int s = 0; s <= kSamples; ++s) {
      p[static_cast<std::size_t>(axis)] = -p_max + 2.0 * p_max * s / kSamples;
      const double v = g.hamiltonian(x, std::span<const double>(p.data(), static_cast<std::size_t>(g.dim)));
      if (s > 0) {
        const bool violates = want_nonincreasing ? v > prev + 1e-12 : v < prev - 1e-12;
        if (violates) {
          return std::string(to_string(g.flavor)) + " flux used with a Hamiltonian that is not " +
                 (want_nonincreasing ? "nonincreasing" : "nondecreasing") + " along axis " +
                 std::to_string(axis + 1);
        }
      }
      prev = v;
    }
  }
  return std::nullopt;
}

}  // namespace frachj
