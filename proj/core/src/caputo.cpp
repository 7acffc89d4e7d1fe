#include "frachj/caputo.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "frachj/error.hpp"
#include "frachj/special.hpp"

namespace frachj {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::domain, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::domain, "dt must be positive and finite");
  }
}

}  // namespace

double rho_alpha(double alpha, double dt) {
  check_alpha(alpha);
  check_dt(dt);
  return gamma(2.0 - alpha) * std::pow(dt, alpha);
}

double l1_increment(double alpha, std::size_t k) {
  const double p = 1.0 - alpha;
  if (k == 0) return 1.0;  // 1^p − 0^p with 0^p := 0
  if (p == 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  return std::pow(kd, p) * std::expm1(p * std::log1p(1.0 / kd));
}

CaputoWeights weights(double alpha, std::size_t n, double dt) {
  check_alpha(alpha);
  CaputoWeights w;
  w.alpha = alpha;
  w.n = n;
  w.dt = dt;
  w.rho = rho_alpha(alpha, dt);
  w.c.resize(n + 1);
  w.c[0] = l1_increment(alpha, n);
  for (std::size_t m = 1; m <= n; ++m) {
    w.c[m] = l1_increment(alpha, n - m) - l1_increment(alpha, n - m + 1);
  }
  return w;
}

WeightSequence::WeightSequence(double alpha, double dt) {
  check_alpha(alpha);
  current_.alpha = alpha;
  current_.dt = dt;
  current_.rho = rho_alpha(alpha, dt);
}

const CaputoWeights& WeightSequence::advance() {
  const double alpha = current_.alpha;
  if (!started_) {
    started_ = true;
    current_.n = 0;
    current_.c.assign(1, l1_increment(alpha, 0));
    return current_;
  }
  const double c0_old = current_.c[0];
  const std::size_t n = current_.n + 1;
  const double c0_new = l1_increment(alpha, n);
  lagged_.push_back(c0_old - c0_new);  // c₁ⁿ⁺¹, lag n−1

  current_.n = n;
  current_.c.resize(n + 1);
  current_.c[0] = c0_new;
  for (std::size_t m = 1; m <= n; ++m) current_.c[m] = lagged_[n - m];
  return current_;
}

double caputo_apply(const CaputoWeights& w, std::span<const double> history) {
  if (history.size() != w.n + 2) {
    throw Error(ErrorKind::length_mismatch,
                "caputo_apply: history must hold n+2 = " + std::to_string(w.n + 2) +
                    " values, got " + std::to_string(history.size()));
  }
  double acc = 0.0;
  for (std::size_t m = 0; m <= w.n; ++m) acc += w.c[m] * history[m];
  return (history[w.n + 1] - acc) / w.rho;
}

CaputoTestFunction monomial(int k) {
  if (k < 0) throw Error(ErrorKind::domain, "monomial: degree must be nonnegative");
  const double kd = static_cast<double>(k);
  CaputoTestFunction f;
  f.value = [kd](double t) { return std::pow(t, kd); };
  f.derivative = [kd](double t, double alpha) {
    if (kd == 0.0) return 0.0;
    return gamma(kd + 1.0) / gamma(kd + 1.0 - alpha) * std::pow(t, kd - alpha);
  };
  return f;
}

TruncationResult truncation_order(double alpha, const CaputoTestFunction& f, double t_final,
                                  std::size_t steps) {
  check_alpha(alpha);
  if (steps == 0 || !(t_final > 0.0)) {
    throw Error(ErrorKind::domain, "truncation_order: need steps > 0 and t_final > 0");
  }
  auto error_at = [&](std::size_t n_steps) {
    const double dt = t_final / static_cast<double>(n_steps);
    const CaputoWeights w = weights(alpha, n_steps - 1, dt);
    std::vector<double> hist(n_steps + 1);
    for (std::size_t m = 0; m <= n_steps; ++m) hist[m] = f.value(static_cast<double>(m) * dt);
    return std::abs(caputo_apply(w, hist) - f.derivative(t_final, alpha));
  };
  TruncationResult r;
  r.error_coarse = error_at(steps);
  r.error_fine = error_at(2 * steps);
  const double scale = 1.0 + std::abs(f.derivative(t_final, alpha));
  if (r.error_coarse <= 1e-12 * scale) {
    r.exact = true;
    r.order = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.order = std::log2(r.error_coarse / r.error_fine);
  }
  return r;
}

}  // namespace frachj
