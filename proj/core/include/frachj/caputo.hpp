#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace frachj {

/// L1 weights c₀ⁿ⁺¹ … cₙⁿ⁺¹ of the discrete Caputo derivative at level n+1,
/// together with the scale ρ_α = Γ(2−α)·Δtᵅ.
///
///   D^α U^{n+1} = (U^{n+1} − Σₘ cₘⁿ⁺¹ Uᵐ) / ρ_α
///
/// Uses 0^{1−α} := 0 for every α ∈ (0, 1], so at α = 1 the weights are
/// (0, …, 0, 1) and the operator is the backward difference quotient.
struct CaputoWeights {
  double alpha = 1.0;
  std::size_t n = 0;
  double dt = 1.0;
  double rho = 1.0;
  std::vector<double> c;  // indexed by history level m = 0..n
};

double rho_alpha(double alpha, double dt);

/// (k+1)^{1−α} − k^{1−α}, evaluated without cancellation.
double l1_increment(double alpha, std::size_t k);

/// Closed-form weights for level n+1.
CaputoWeights weights(double alpha, std::size_t n, double dt);

/// Builds the weights level by level, reusing the previous level:
/// cₘ₊₁ⁿ⁺² = cₘⁿ⁺¹ for m ≥ 1, c₁ⁿ⁺² = c₀ⁿ⁺¹ − c₀ⁿ⁺², only c₀ is new.
class WeightSequence {
 public:
  WeightSequence(double alpha, double dt);

  /// Weights for the level after the current one; the first call gives n = 0.
  const CaputoWeights& advance();
  const CaputoWeights& current() const noexcept { return current_; }

 private:
  CaputoWeights current_;
  std::vector<double> lagged_;  // lagged_[k] = c_{n−k}ⁿ⁺¹ for k < n, independent of n
  bool started_ = false;
};

/// (U^{n+1} − Σ cₘ Uᵐ)/ρ for a single node; `history` holds U⁰ … U^{n+1}.
double caputo_apply(const CaputoWeights& w, std::span<const double> history);

/// A test function with a known Caputo derivative.
struct CaputoTestFunction {
  std::function<double(double)> value;
  std::function<double(double t, double alpha)> derivative;
};

/// f(t) = t^k, with ∂ᵅ t^k = Γ(k+1)/Γ(k+1−α) · t^{k−α}.
CaputoTestFunction monomial(int k);

struct TruncationResult {
  double order = 0.0;        // NaN when the operator is exact on f
  double error_coarse = 0.0;  // at Δt = t_final/steps
  double error_fine = 0.0;    // at Δt/2
  bool exact = false;
};

/// Empirical order of the L1 operator at t_final from runs with `steps`
/// and 2·`steps` uniform steps.
TruncationResult truncation_order(double alpha, const CaputoTestFunction& f,
                                  double t_final = 1.0, std::size_t steps = 64);

}  // namespace frachj
