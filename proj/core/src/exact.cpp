#include "frachj/exact.hpp"

#include <cmath>
#include <memory>

#include "frachj/error.hpp"

namespace frachj {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::domain, "alpha must lie in (0, 1]");
  }
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::configuration, "dim must be 1 or 2");
}

double norm_sq(const Point& x, int dim) { return dim == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1]; }

// Γ(αn+1)/Γ(α(n−1)+1); direct gamma while both arguments are in range.
double beta_n(double alpha, std::size_t n) {
  const double a = alpha * static_cast<double>(n) + 1.0;
  const double b = alpha * static_cast<double>(n - 1) + 1.0;
  if (a <= 170.0) return gamma(a) / gamma(b);
  return std::exp(log_gamma(a) - log_gamma(b));
}

std::vector<double> betas(double alpha, std::size_t n_terms) {
  std::vector<double> beta(n_terms, 0.0);
  for (std::size_t n = 1; n < n_terms; ++n) beta[n] = beta_n(alpha, n);
  return beta;
}

// gₙ = fₙσⁿ satisfies gₙ = −(2σ/βₙ) Σ gᵢgⱼ.
std::vector<double> scaled_recurrence(const std::vector<double>& beta, double sigma) {
  std::vector<double> g(beta.size(), 0.0);
  g[0] = 1.0;
  for (std::size_t n = 1; n < g.size(); ++n) {
    long double conv = 0.0L;
    for (std::size_t i = 0; i < n; ++i) conv += static_cast<long double>(g[i]) * g[n - 1 - i];
    g[n] = static_cast<double>(-2.0L * sigma * conv / beta[n]);
  }
  return g;
}

}  // namespace

PowerSeries f_coefficients(double alpha, std::size_t n_terms) {
  check_alpha(alpha);
  if (n_terms == 0) throw Error(ErrorKind::configuration, "f_coefficients: n_terms must be >= 1");
  const std::vector<double> beta = betas(alpha, n_terms);

  // pilot growth rate on an unscaled prefix picks σ ≈ radius in t^α
  double sigma = 1.0;
  constexpr std::size_t kPilot = 64;
  if (n_terms > 2) {
    const std::size_t m = std::min(kPilot, n_terms);
    const std::vector<double> pilot_beta(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(m));
    const std::vector<double> pilot = scaled_recurrence(pilot_beta, 1.0);
    const std::size_t hi = m - 1;
    const std::size_t lo = hi / 2;
    if (pilot[hi] != 0.0 && pilot[lo] != 0.0 && std::isfinite(pilot[hi])) {
      const double rate = std::exp((std::log(std::abs(pilot[hi])) - std::log(std::abs(pilot[lo]))) /
                                   static_cast<double>(hi - lo));
      if (rate > 0.0 && std::isfinite(rate)) sigma = std::exp2(-std::round(std::log2(rate)));
    }
  }

  PowerSeries s;
  s.coefficients = scaled_recurrence(beta, sigma);
  s.exponent_step = alpha;
  s.variable_scale = sigma;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (!std::isfinite(s.coefficients[n])) {
      throw Error(ErrorKind::numerical, "f_coefficients: coefficient " + std::to_string(n) +
                                            " is not finite; reduce n_terms");
    }
  }
  return s;
}

double critical_time(double alpha, std::size_t n_terms) {
  if (n_terms < 100) throw Error(ErrorKind::configuration, "critical_time: n_terms must be >= 100");
  return radius_estimate(f_coefficients(alpha, n_terms), 50);
}

Test1Solution::Test1Solution(double alpha, int dim, std::size_t n_terms)
    : alpha_(alpha), dim_(dim) {
  check_alpha(alpha);
  check_dim(dim);
  if (n_terms < 100) throw Error(ErrorKind::configuration, "Test1Solution: n_terms must be >= 100");
  f_ = f_coefficients(alpha, n_terms);
  beta_ = betas(alpha, n_terms);
  critical_time_ = radius_estimate(f_, 50);
}

void Test1Solution::check_time(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "Test1Solution: t must be >= 0");
  if (t > max_time()) {
    throw Error(ErrorKind::beyond_critical_time,
                "Test1Solution: t = " + format_real(t) + " exceeds 0.95 T_alpha = " +
                    format_real(max_time()));
  }
}

double Test1Solution::f_value(double t) const {
  check_time(t);
  return series_eval(f_, t, f_.size());
}

double Test1Solution::operator()(double t, const Point& x) const {
  return std::min(0.0, norm_sq(x, dim_) * f_value(t) - 1.0);
}

double Test1Solution::residual(double t, std::size_t n_terms) const {
  check_time(t);
  if (n_terms == 0) n_terms = f_.size();
  if (n_terms > f_.size()) throw Error(ErrorKind::length_mismatch, "residual: too many terms");
  const auto& g = f_.coefficients;
  const long double s = static_cast<long double>(std::pow(t, alpha_)) / f_.variable_scale;
  long double value = 0.0L;
  long double deriv = 0.0L;
  long double power = 1.0L;  // s^{n}
  for (std::size_t n = 0; n < n_terms; ++n) {
    value += g[n] * power;
    if (n + 1 < n_terms) deriv += static_cast<long double>(g[n + 1]) * beta_[n + 1] * power;
    power *= s;
  }
  deriv /= f_.variable_scale;
  return static_cast<double>(std::abs(deriv + 2.0L * value * value));
}

Test2Solution::Test2Solution(double alpha, int dim) : alpha_(alpha), dim_(dim) {
  check_alpha(alpha);
  check_dim(dim);
  c_quadratic_ = 1.0 / (alpha * gamma(2.0 * alpha));
  c_linear_ = 2.0 / (alpha * gamma(alpha));
}

double Test2Solution::operator()(double t, const Point& x) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "Test2Solution: t must be >= 0");
  const double r2 = norm_sq(x, dim_);
  const double ta = std::pow(t, alpha_);
  return -r2 - c_quadratic_ * ta * ta - c_linear_ * ta * std::sqrt(r2);
}

double test1_classical(double t, const Point& x, int dim) {
  return std::min(0.0, norm_sq(x, dim) / (1.0 + 2.0 * t) - 1.0);
}

double test2_classical(double t, const Point& x, int dim) {
  const double r = std::sqrt(norm_sq(x, dim));
  return -(r + t) * (r + t);
}

Problem test1_problem(double alpha, int dim, BoundaryMode boundary, double box_lo, double box_hi) {
  auto sol = std::make_shared<const Test1Solution>(alpha, dim);
  Problem p;
  p.name = "test1";
  p.dim = dim;
  p.hamiltonian = [](const Point&, std::span<const double> q) {
    double s = 0.0;
    for (double v : q) s += v * v;
    return 0.5 * s;
  };
  p.lipschitz_bound = 2.0;
  p.gradient_radius = 2.0;
  p.initial = [dim](const Point& x) { return std::min(0.0, norm_sq(x, dim) - 1.0); };
  p.box_lo = box_lo;
  p.box_hi = box_hi;
  p.boundary = boundary;
  p.exact = [sol](double t, const Point& x) { return (*sol)(t, x); };
  return p;
}

Problem test2_problem(double alpha, int dim, BoundaryMode boundary, double box_lo, double box_hi) {
  auto sol = std::make_shared<const Test2Solution>(alpha, dim);
  Problem p;
  p.name = "test2";
  p.dim = dim;
  p.hamiltonian = [](const Point&, std::span<const double> q) {
    double s = 0.0;
    for (double v : q) s += v * v;
    return std::sqrt(s);
  };
  p.lipschitz_bound = 1.0;
  p.initial = [dim](const Point& x) { return -norm_sq(x, dim); };
  p.box_lo = box_lo;
  p.box_hi = box_hi;
  p.boundary = boundary;
  p.exact = [sol](double t, const Point& x) { return (*sol)(t, x); };
  return p;
}

}  // namespace frachj
