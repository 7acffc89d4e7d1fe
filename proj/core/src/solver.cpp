#include "frachj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "frachj/error.hpp"
#include "frachj/special.hpp"

namespace frachj {
namespace {

// Splits [0, count) into contiguous chunks, one per worker.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = std::min(count, w * chunk);
    const std::size_t e = std::min(count, b + chunk);
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(count, chunk));
}

// Above this many levels the weighted history sum is compensated.
constexpr std::size_t kCompensateAbove = 1000;

}  // namespace

void Problem::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::configuration, "problem dim must be 1 or 2");
  if (!hamiltonian) throw Error(ErrorKind::configuration, "problem has no Hamiltonian");
  if (!initial) throw Error(ErrorKind::configuration, "problem has no initial datum");
  if (!(lipschitz_bound > 0.0) || !std::isfinite(lipschitz_bound)) {
    throw Error(ErrorKind::configuration, "problem Lipschitz bound must be positive and finite");
  }
  if (!(box_hi > box_lo)) throw Error(ErrorKind::configuration, "problem box must have lo < hi");
  if (boundary == BoundaryMode::dirichlet_from_exact && !exact) {
    throw Error(ErrorKind::configuration,
                "dirichlet_from_exact boundary requires an exact solution");
  }
}

void History::append(GridFunction u) {
  if (!(u.spec() == spec)) throw Error(ErrorKind::length_mismatch, "History: grid mismatch");
  levels.push_back(std::move(u));
}

Scheme::Scheme(Problem problem, SchemeOptions options)
    : problem_(std::move(problem)), options_(options) {
  problem_.validate();
  grid_ = GridSpec::on_box(problem_.dim, options_.h, problem_.box_lo, problem_.box_hi,
                           problem_.boundary);
  rho_ = rho_alpha(options_.alpha, options_.dt);

  flux_.flavor = options_.flavor;
  flux_.hamiltonian = problem_.hamiltonian;
  flux_.lipschitz_bound = problem_.lipschitz_bound;
  flux_.theta = options_.theta.value_or(default_theta(options_.alpha));
  flux_.dim = problem_.dim;
  flux_.validate();

  cfl_ = cfl_check(flux_.flavor, options_.alpha, options_.dt, options_.h, flux_.lipschitz_bound,
                   flux_.theta, flux_.dim);
  if (!cfl_.satisfied && !options_.allow_unstable) {
    throw Error(ErrorKind::cfl_violation,
                "CFL condition violated: lhs " + format_real(cfl_.lhs) + " vs rhs " +
                    format_real(cfl_.rhs) + " (theta " + format_real(flux_.theta) +
                    "); pass allow_unstable to run anyway");
  }
}

GridFunction Scheme::initial_condition() const {
  return GridFunction::sample(grid_, problem_.initial);
}

GhostProvider Scheme::ghost_at(double t) const {
  switch (problem_.boundary) {
    case BoundaryMode::periodic:
      return {};
    case BoundaryMode::dirichlet_frozen:
      return [init = problem_.initial](const Point& p) { return init(p); };
    case BoundaryMode::dirichlet_from_exact:
      return [exact = problem_.exact, t](const Point& p) { return exact(t, p); };
  }
  return {};
}

std::vector<double> Scheme::fluxes(const GridFunction& u, double t) const {
  const DiscreteGradient grad = discrete_gradient(u, ghost_at(t));
  std::vector<double> out(u.size());
  const double lam = lambda();
  parallel_for(out.size(), options_.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) out[k] = flux_eval(flux_, grid_.node(k), grad.at(k), lam);
  });
  return out;
}

GMapResult Scheme::g_map(std::span<const GridFunction> levels, const CaputoWeights& w) const {
  const std::size_t n = w.n;
  if (levels.size() != n + 1) {
    throw Error(ErrorKind::length_mismatch, "g_map: need n+1 history levels for weights at level n+1");
  }
  for (const auto& level : levels) {
    if (!(level.spec() == grid_)) throw Error(ErrorKind::length_mismatch, "g_map: grid mismatch");
  }
  const double t_n = static_cast<double>(n) * options_.dt;
  const DiscreteGradient grad = discrete_gradient(levels[n], ghost_at(t_n));
  const std::size_t nodes = grid_.node_count();
  const double lam = lambda();
  const bool compensated = n + 1 > kCompensateAbove;

  GMapResult r;
  r.values.assign(nodes, 0.0);
  std::vector<double> flux(nodes);
  parallel_for(nodes, options_.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) flux[k] = flux_eval(flux_, grid_.node(k), grad.at(k), lam);
    double* out = r.values.data();
    if (!compensated) {
      for (std::size_t m = 0; m <= n; ++m) {
        const double cm = w.c[m];
        const double* u = levels[m].values().data();
        for (std::size_t k = b; k < e; ++k) out[k] += cm * u[k];
      }
    } else {
      // Neumaier summation, ascending m per node
      std::vector<double> comp(e - b, 0.0);
      for (std::size_t m = 0; m <= n; ++m) {
        const double cm = w.c[m];
        const double* u = levels[m].values().data();
        for (std::size_t k = b; k < e; ++k) {
          const double term = cm * u[k];
          const double s = out[k] + term;
          comp[k - b] += std::abs(out[k]) >= std::abs(term) ? (out[k] - s) + term
                                                            : (term - s) + out[k];
          out[k] = s;
        }
      }
      for (std::size_t k = b; k < e; ++k) out[k] += comp[k - b];
    }
    for (std::size_t k = b; k < e; ++k) out[k] -= rho_ * flux[k];
  });
  // fixed-order reductions keep reports independent of the thread count
  for (double f : flux) r.flux_sup = std::max(r.flux_sup, std::abs(f));
  r.gradient_range = grad.sup_norm();
  return r;
}

std::pair<GridFunction, StepReport> step(const History& history, const Scheme& scheme,
                                         const CaputoWeights& w, double prior_flux_sup) {
  if (history.levels.empty()) throw Error(ErrorKind::length_mismatch, "step: empty history");
  if (w.n != history.last_level()) {
    throw Error(ErrorKind::length_mismatch, "step: weights built for level " +
                                                std::to_string(w.n + 1) + " but history has " +
                                                std::to_string(history.levels.size()) + " levels");
  }
  GMapResult r = scheme.g_map(history.levels, w);
  const GridSpec& grid = scheme.grid();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (!std::isfinite(r.values[k])) {
      const Point p = grid.node(k);
      throw Error(ErrorKind::numerical,
                  "non-finite value at level " + std::to_string(w.n + 1) + ", node " +
                      std::to_string(k) + " (x = " + format_real(p[0]) +
                      (grid.dim == 2 ? ", y = " + format_real(p[1]) : std::string()) + ")");
    }
  }
  GridFunction next(grid, std::move(r.values));

  StepReport rep;
  rep.n = w.n;
  rep.increment = sup_distance(next, history.levels.back());
  rep.distance_from_initial = sup_distance(next, history.levels.front());
  rep.flux_sup = std::max(prior_flux_sup, r.flux_sup);
  const double alpha = scheme.options().alpha;
  const double t_next = static_cast<double>(w.n + 1) * scheme.options().dt;
  if (alpha < 1.0) {
    rep.stability_bound =
        rep.flux_sup * gamma(2.0 - alpha) / (alpha * (1.0 - alpha)) * std::pow(t_next, alpha);
  } else {
    rep.stability_bound = rep.flux_sup * t_next;
  }
  rep.bound_satisfied =
      rep.distance_from_initial <= rep.stability_bound + 1e-9 * (1.0 + rep.stability_bound);
  rep.gradient_range = r.gradient_range;
  rep.gradient_range_exceeded =
      r.gradient_range > scheme.problem().gradient_radius * (1.0 + 1e-12);
  return {std::move(next), rep};
}

std::size_t step_count(double T, double dt) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::configuration, "T must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::configuration, "dt must be positive");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw Error(ErrorKind::configuration, "T/dt = " + format_real(ratio) +
                                              " is not an integer; choose dt dividing T");
  }
  return static_cast<std::size_t>(rounded);
}

History solve(const Scheme& scheme, double T, std::vector<StepReport>* reports) {
  const std::size_t steps = step_count(T, scheme.options().dt);
  History history{scheme.grid(), scheme.options().dt, scheme.options().alpha, {}};
  history.levels.reserve(steps + 1);
  history.append(scheme.initial_condition());
  if (reports) reports->reserve(reports->size() + steps);

  WeightSequence weights(scheme.options().alpha, scheme.options().dt);
  double flux_sup = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const CaputoWeights& w = weights.advance();
    auto [next, rep] = step(history, scheme, w, flux_sup);
    flux_sup = rep.flux_sup;
    history.append(std::move(next));
    if (reports) reports->push_back(rep);
  }
  return history;
}

History solve(const Problem& problem, const SchemeOptions& options, double T,
              std::vector<StepReport>* reports) {
  return solve(Scheme(problem, options), T, reports);
}

bool GPropertyReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PropertyCheck& c) { return c.passed || c.skipped; });
}

const PropertyCheck* GPropertyReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

class RandomFields {
 public:
  RandomFields(const GridSpec& grid, std::uint64_t seed) : grid_(grid), rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  // Smooth periodic field with max |D_h U| equal to `grad` plus a random offset.
  GridFunction smooth(double grad, double offset) {
    const double period = static_cast<double>(grid_.nodes_per_axis) * grid_.h;
    const double lo = grid_.origin[0];
    std::array<double, 3> ax{}, ay{}, px{}, py{};
    for (int k = 0; k < 3; ++k) {
      ax[k] = uniform(-1.0, 1.0);
      ay[k] = uniform(-1.0, 1.0);
      px[k] = uniform(0.0, 2.0 * std::numbers::pi);
      py[k] = uniform(0.0, 2.0 * std::numbers::pi);
    }
    const double cross = uniform(-1.0, 1.0);
    auto shape = [&](const Point& p) {
      const double sx = 2.0 * std::numbers::pi * (p[0] - lo) / period;
      const double sy = 2.0 * std::numbers::pi * (p[1] - lo) / period;
      double v = 0.0;
      for (int k = 0; k < 3; ++k) {
        v += ax[k] * std::sin((k + 1) * sx + px[k]);
        if (grid_.dim == 2) v += ay[k] * std::sin((k + 1) * sy + py[k]);
      }
      if (grid_.dim == 2) v += cross * std::sin(sx + px[0]) * std::sin(sy + py[0]);
      return v;
    };
    const GridFunction raw = GridFunction::sample(grid_, shape);
    const double g = discrete_gradient(raw).sup_norm();
    const double scale = g > 0.0 ? grad / g : 0.0;
    std::vector<double> v(raw.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = offset + scale * raw[k];
    return GridFunction(grid_, std::move(v));
  }

  // Nonnegative node-wise noise in [0.1·amp, amp].
  GridFunction bumps(double amp) {
    std::vector<double> v(grid_.node_count());
    for (double& x : v) x = uniform(0.1 * amp, amp);
    return GridFunction(grid_, std::move(v));
  }

 private:
  GridSpec grid_;
  std::mt19937_64 rng_;
};

GridFunction add(const GridFunction& a, const GridFunction& b, double scale_b = 1.0) {
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + scale_b * b[k];
  return GridFunction(a.spec(), std::move(v));
}

GridFunction shifted(const GridFunction& a, double lambda) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x += lambda;
  return GridFunction(a.spec(), std::move(v));
}

double history_sup(std::span<const GridFunction> levels) {
  double m = 0.0;
  for (const auto& u : levels) m = std::max(m, sup_norm(u));
  return m;
}

void record(PropertyCheck& c, double observed, double bound, double tol) {
  ++c.trials;
  const double slack = bound - observed;
  c.worst_slack = std::min(c.worst_slack, slack);
  if (observed > bound + tol) {
    ++c.failures;
    c.passed = false;
  }
}

}  // namespace

GPropertyReport verify_g_properties(const Problem& problem, const SchemeOptions& options,
                                    std::size_t trials, std::uint64_t seed) {
  Problem torus = problem;
  torus.boundary = BoundaryMode::periodic;
  const Scheme scheme(torus, options);
  const GridSpec& grid = scheme.grid();
  RandomFields rf(grid, seed);

  // keep sampled gradients inside the range where L bounds |∂H/∂p|
  const double radius = 0.9 * std::min(problem.gradient_radius, 2.0);
  const double rho = scheme.rho();
  const double alpha = options.alpha;
  const double dt = options.dt;

  double h_at_zero = 0.0;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const std::array<double, 2> zero{};
    h_at_zero = std::max(
        h_at_zero, std::abs(problem.hamiltonian(grid.node(k), std::span<const double>(
                                                                  zero.data(), static_cast<std::size_t>(grid.dim)))));
  }

  PropertyCheck commute;
  commute.name = "commutes_with_constants";
  PropertyCheck nonexpansive;
  nonexpansive.name = "sup_nonexpansive";
  PropertyCheck monotone;
  monotone.name = "monotone_ordered_inputs";
  PropertyCheck gradient;
  gradient.name = "gradient_bound";
  PropertyCheck increment;
  increment.name = "time_increment_bound";
  PropertyCheck sup_bound;
  sup_bound.name = "sup_bound";

  const bool gradient_check = problem.x_dependent && problem.spatial_lipschitz.has_value();
  if (!gradient_check) {
    gradient.skipped = true;
    gradient.note = "H does not depend on x (or no constant C declared); bound not applicable";
  }
  const double c_eff = gradient_check ? std::max(1.0, *problem.spatial_lipschitz) : 0.0;

  auto random_history = [&](std::size_t levels, double grad) {
    std::vector<GridFunction> h;
    for (std::size_t m = 0; m < levels; ++m) h.push_back(rf.smooth(grad * rf.uniform(0.3, 1.0), rf.uniform(-1.0, 1.0)));
    return h;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = rf.index(6);
    const CaputoWeights w = weights(alpha, n, dt);
    const auto u = random_history(n + 1, radius);
    const GMapResult gu = scheme.g_map(u, w);
    const double u_sup = history_sup(u);

    // G(U + λ) = G(U) + λ
    {
      const double lam = rf.uniform(-5.0, 5.0);
      std::vector<GridFunction> us;
      for (const auto& level : u) us.push_back(shifted(level, lam));
      const GMapResult gs = scheme.g_map(us, w);
      double dev = 0.0;
      for (std::size_t k = 0; k < gs.values.size(); ++k) {
        dev = std::max(dev, std::abs(gs.values[k] - (gu.values[k] + lam)));
      }
      record(commute, dev, 0.0, 1e-12 * (1.0 + std::abs(lam) + u_sup));
    }

    // ‖G(U) − G(V)‖ ≤ ‖U − V‖
    {
      const auto v = random_history(n + 1, radius);
      const GMapResult gv = scheme.g_map(v, w);
      double lhs = 0.0;
      for (std::size_t k = 0; k < gv.values.size(); ++k) lhs = std::max(lhs, std::abs(gu.values[k] - gv.values[k]));
      double rhs = 0.0;
      for (std::size_t m = 0; m <= n; ++m) rhs = std::max(rhs, sup_distance(u[m], v[m]));
      record(nonexpansive, lhs, rhs, 1e-12 * (1.0 + rhs));
    }

    // U ≤ V componentwise ⇒ G(U) ≤ G(V)
    {
      const auto base = random_history(n + 1, 0.75 * radius);
      std::vector<GridFunction> upper;
      for (const auto& level : base) upper.push_back(add(level, rf.bumps(0.25 * radius * grid.h)));
      const GMapResult gl = scheme.g_map(base, w);
      const GMapResult gh = scheme.g_map(upper, w);
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < gl.values.size(); ++k) worst = std::min(worst, gh.values[k] - gl.values[k]);
      // observed = −min(G(V) − G(U)), bound 0, exact comparison
      record(monotone, -worst, 0.0, 0.0);
    }

    // ‖D_h G(U)‖ ≤ 5C‖D_h U‖ + C
    if (gradient_check) {
      const double lhs = discrete_gradient(GridFunction(grid, gu.values)).sup_norm();
      double du = 0.0;
      for (const auto& level : u) du = std::max(du, discrete_gradient(level).sup_norm());
      const double rhs = 5.0 * c_eff * du + c_eff;
      record(gradient, lhs, rhs, 1e-12 * (1.0 + rhs));
    }

    // ‖G^{n+1}(U) − Gⁿ(U)‖ ≤ (1 − c₀ⁿ⁺²) sup‖U^{m+1} − U^m‖ + 2ρK
    {
      const auto big = random_history(n + 2, radius);
      const CaputoWeights w_next = weights(alpha, n + 1, dt);
      const GMapResult g_next = scheme.g_map(big, w_next);
      const GMapResult g_curr = scheme.g_map(std::span<const GridFunction>(big).first(n + 1), w);
      double lhs = 0.0;
      for (std::size_t k = 0; k < g_next.values.size(); ++k) lhs = std::max(lhs, std::abs(g_next.values[k] - g_curr.values[k]));
      double inc = 0.0;
      for (std::size_t m = 0; m <= n; ++m) inc = std::max(inc, sup_distance(big[m + 1], big[m]));
      double k_sup = 0.0;
      for (std::size_t m = 0; m < big.size(); ++m) {
        for (double f : scheme.fluxes(big[m], static_cast<double>(m) * dt)) k_sup = std::max(k_sup, std::abs(f));
      }
      const double rhs = (1.0 - w_next.c[0]) * inc + 2.0 * rho * k_sup;
      record(increment, lhs, rhs, 1e-12 * (1.0 + rhs));
    }

    // ‖G(U)‖ ≤ ‖U‖ + ρ sup|H(x, 0)|
    {
      double lhs = 0.0;
      for (double v : gu.values) lhs = std::max(lhs, std::abs(v));
      const double rhs = u_sup + rho * h_at_zero;
      record(sup_bound, lhs, rhs, 1e-12 * (1.0 + rhs));
    }
  }

  GPropertyReport report;
  report.checks = {commute, nonexpansive, monotone, gradient, increment, sup_bound};
  return report;
}

}  // namespace frachj
