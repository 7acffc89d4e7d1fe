#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frachj/grid.hpp"
#include "frachj/hamiltonian.hpp"
#include "frachj/solver.hpp"

namespace frachj {

const char* version() noexcept;

/// How a refinement ladder picks Δt per rung.
enum class DtPolicy {
  fixed,       // config dt on every rung, reduced to suggest_dt only where CFL fails
  cfl_scaled,  // Δt at half the CFL limit of each rung
};

const char* to_string(DtPolicy policy) noexcept;
DtPolicy parse_dt_policy(const std::string& name);

/// Everything needed to reproduce a run. JSON keys match the field names.
struct RunConfig {
  std::string problem = "test1";  // test1 | test2
  int dim = 1;
  double alpha = 1.0;
  FluxFlavor scheme = FluxFlavor::lax_friedrichs;
  std::optional<double> theta;
  double dt = 1e-3;
  double h = 0.1;
  std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};
  double T = 0.2;
  double box_lo = -2.0;
  double box_hi = 2.0;
  std::optional<BoundaryMode> boundary;  // per-problem default when absent
  std::vector<double> alphas;            // sweep members
  DtPolicy dt_policy = DtPolicy::fixed;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  bool allow_unstable = false;
  unsigned threads = 1;
  std::string out;  // output directory; empty writes nothing

  /// Parses a JSON object; unknown keys are a configuration error.
  static RunConfig from_json(const std::string& text);
  /// Applies the keys present in `text` on top of *this.
  void merge_json(const std::string& text);
  std::string to_json() const;
  void validate() const;
};

/// The problem named by `config`, at the given α.
Problem make_problem(const RunConfig& config, double alpha);
SchemeOptions make_options(const RunConfig& config, double alpha, double dt, double h);

/// Exact solution for the configured problem, with the latest time it may be
/// evaluated at (infinite when unrestricted).
struct Oracle {
  std::function<double(double, const Point&)> eval;
  double max_time = 0.0;
};
Oracle make_oracle(const RunConfig& config, double alpha);

struct RunResult {
  std::string manifest;  // JSON text
  GridFunction final_state;
  double final_time = 0.0;
  std::optional<double> comparison_time;  // level compared against the oracle
  std::optional<double> linf_error;
  std::optional<GridFunction> error_field;
  std::vector<StepReport> reports;
  CflReport cfl;
  std::vector<std::string> warnings;
};

/// Solves once. With `config.out` set, writes manifest.json, snapshot.csv and
/// (when an oracle exists) error.csv there.
RunResult run_single(const RunConfig& config);

struct ErrorRow {
  double h = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double linf_error = 0.0;
  std::optional<double> observed_rate;  // log₂(e_{k−1}/e_k)
  bool dt_rescaled = false;             // fixed policy fell back to suggest_dt
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  double alpha = 1.0;
  FluxFlavor scheme = FluxFlavor::lax_friedrichs;
  std::string problem;
  double T = 0.0;                 // requested horizon
  double comparison_time = 0.0;   // horizon actually compared (may be reduced)
  DtPolicy dt_policy = DtPolicy::fixed;
  double summary_rate = 0.0;      // least-squares slope of log e against log h
  std::vector<std::string> notes;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Least-squares slope of log e against log h.
double fitted_rate(const std::vector<double>& h, const std::vector<double>& e);

struct LadderOptions {
  double alpha = 1.0;
  FluxFlavor flavor = FluxFlavor::lax_friedrichs;
  std::optional<double> theta;
  std::vector<double> ladder;
  double dt = 1e-3;
  double T = 0.2;
  DtPolicy policy = DtPolicy::fixed;
  unsigned threads = 1;
};

/// Refinement study of `problem` against `oracle` at time T.
ErrorTable run_convergence(const Problem& problem, const LadderOptions& options,
                           const std::function<double(double, const Point&)>& oracle);
/// Refinement study for the configured problem; Test 1 compares at
/// min(T, 0.95·T_α) rounded down to a multiple of dt.
ErrorTable run_convergence(const RunConfig& config);

struct SweepProfile {
  double alpha = 1.0;
  GridFunction state;
};

struct SweepResult {
  std::vector<SweepProfile> profiles;  // ascending α; α = 1 always present
  std::string to_csv() const;          // long format: alpha, coordinates, value
};

SweepResult run_alpha_sweep(const RunConfig& config, const std::vector<double>& alphas);

struct SuiteEntry {
  std::string module;
  std::string name;
  bool passed = true;
  bool expected_failure = false;  // failure is the intended outcome
  std::string detail;
};

struct PropertySuiteReport {
  std::vector<SuiteEntry> entries;
  /// No entry fails unexpectedly and every expected failure did fail.
  bool ok() const noexcept;
  std::string to_json() const;
};

/// Weight identities, CFL reductions, Gⁿ-map properties (including a run at
/// 50× the CFL Δt that must break monotonicity), stability and oracle checks.
PropertySuiteReport run_property_suite(const RunConfig& config, std::size_t trials);

}  // namespace frachj
