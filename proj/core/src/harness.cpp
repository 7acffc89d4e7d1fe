#include "frachj/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "frachj/caputo.hpp"
#include "frachj/error.hpp"
#include "frachj/exact.hpp"
#include "frachj/special.hpp"

#ifndef FRACHJ_VERSION
#define FRACHJ_VERSION "unknown"
#endif

namespace frachj {

using json = nlohmann::ordered_json;

namespace {

constexpr int kManifestSchemaVersion = 1;

json real_or_null(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json to_json_value(const CflReport& r) {
  json j{{"flavor", to_string(r.flavor)}, {"alpha", r.alpha},   {"dt", r.dt},
         {"h", r.h},                      {"lipschitz_bound", r.lipschitz_bound},
         {"dim", r.dim},                  {"theta", r.theta},   {"satisfied", r.satisfied},
         {"lhs", r.lhs},                  {"rhs", r.rhs}};
  if (r.theta_window) j["theta_window"] = {r.theta_window->first, r.theta_window->second};
  return j;
}

json to_json_value(const StepReport& s) {
  return json{{"n", s.n},
              {"increment", s.increment},
              {"distance_from_initial", s.distance_from_initial},
              {"flux_sup", s.flux_sup},
              {"stability_bound", s.stability_bound},
              {"bound_satisfied", s.bound_satisfied},
              {"gradient_range", s.gradient_range},
              {"gradient_range_exceeded", s.gradient_range_exceeded}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::configuration, "cannot write " + path.string());
  os << text;
}

std::filesystem::path output_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::configuration, "cannot create output directory " + out);
  return dir;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::configuration, std::string("config key '") + key + "': " + e.what());
  }
}

std::size_t floor_steps(double t, double dt) {
  return static_cast<std::size_t>(std::floor(t / dt * (1.0 + 1e-12)));
}

// Δt ≤ dt_target with T/Δt integral.
double divide_horizon(double T, double dt_target) {
  if (T == 0.0) return dt_target;
  const double steps = std::ceil(T / dt_target * (1.0 - 1e-12));
  return T / std::max(1.0, steps);
}

}  // namespace

const char* version() noexcept { return FRACHJ_VERSION; }

const char* to_string(DtPolicy policy) noexcept {
  switch (policy) {
    case DtPolicy::fixed:
      return "fixed";
    case DtPolicy::cfl_scaled:
      return "cfl_scaled";
  }
  return "unknown";
}

DtPolicy parse_dt_policy(const std::string& name) {
  if (name == "fixed") return DtPolicy::fixed;
  if (name == "cfl_scaled" || name == "cfl-scaled") return DtPolicy::cfl_scaled;
  throw Error(ErrorKind::configuration, "unknown dt policy '" + name + "' (fixed, cfl_scaled)");
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  c.merge_json(text);
  return c;
}

void RunConfig::merge_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::configuration, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::configuration, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "problem") {
      problem = get_as<std::string>(j, "problem");
    } else if (key == "dim") {
      dim = get_as<int>(j, "dim");
    } else if (key == "alpha") {
      alpha = get_as<double>(j, "alpha");
    } else if (key == "scheme") {
      scheme = parse_flux_flavor(get_as<std::string>(j, "scheme"));
    } else if (key == "theta") {
      theta = value.is_null() ? std::nullopt : std::optional<double>(get_as<double>(j, "theta"));
    } else if (key == "dt") {
      dt = get_as<double>(j, "dt");
    } else if (key == "h") {
      h = get_as<double>(j, "h");
    } else if (key == "ladder") {
      ladder = get_as<std::vector<double>>(j, "ladder");
    } else if (key == "T") {
      T = get_as<double>(j, "T");
    } else if (key == "box") {
      const auto box = get_as<std::vector<double>>(j, "box");
      if (box.size() != 2) throw Error(ErrorKind::configuration, "config key 'box' must be [lo, hi]");
      box_lo = box[0];
      box_hi = box[1];
    } else if (key == "boundary") {
      boundary = value.is_null() ? std::nullopt
                                 : std::optional<BoundaryMode>(
                                       parse_boundary_mode(get_as<std::string>(j, "boundary")));
    } else if (key == "alphas") {
      alphas = get_as<std::vector<double>>(j, "alphas");
    } else if (key == "dt_policy") {
      dt_policy = parse_dt_policy(get_as<std::string>(j, "dt_policy"));
    } else if (key == "trials") {
      trials = get_as<std::size_t>(j, "trials");
    } else if (key == "seed") {
      seed = get_as<std::uint64_t>(j, "seed");
    } else if (key == "allow_unstable") {
      allow_unstable = get_as<bool>(j, "allow_unstable");
    } else if (key == "threads") {
      threads = get_as<unsigned>(j, "threads");
    } else if (key == "out") {
      out = get_as<std::string>(j, "out");
    } else {
      throw Error(ErrorKind::configuration, "unknown config key '" + key + "'");
    }
  }
}

std::string RunConfig::to_json() const {
  json j{{"problem", problem},
         {"dim", dim},
         {"alpha", alpha},
         {"scheme", to_string(scheme)},
         {"theta", real_or_null(theta)},
         {"dt", dt},
         {"h", h},
         {"ladder", ladder},
         {"T", T},
         {"box", {box_lo, box_hi}},
         {"boundary", boundary ? json(to_string(*boundary)) : json(nullptr)},
         {"alphas", alphas},
         {"dt_policy", to_string(dt_policy)},
         {"trials", trials},
         {"seed", seed},
         {"allow_unstable", allow_unstable},
         {"threads", threads},
         {"out", out}};
  return j.dump(2);
}

void RunConfig::validate() const {
  if (problem != "test1" && problem != "test2") {
    throw Error(ErrorKind::configuration, "problem must be test1 or test2");
  }
  if (dim != 1 && dim != 2) throw Error(ErrorKind::configuration, "dim must be 1 or 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::configuration, "alpha must lie in (0, 1]");
  if (!(dt > 0.0)) throw Error(ErrorKind::configuration, "dt must be positive");
  if (!(h > 0.0)) throw Error(ErrorKind::configuration, "h must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::configuration, "T must be >= 0");
  if (!(box_hi > box_lo)) throw Error(ErrorKind::configuration, "box must satisfy lo < hi");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0)) throw Error(ErrorKind::configuration, "ladder entries must be positive");
    if (k > 0 && ladder[k] * 2.0 != ladder[k - 1]) {
      throw Error(ErrorKind::configuration, "ladder entries must halve exactly");
    }
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::configuration, "alphas must lie in (0, 1]");
  }
  if (threads == 0) throw Error(ErrorKind::configuration, "threads must be >= 1");
}

Problem make_problem(const RunConfig& config, double alpha) {
  if (config.problem == "test1") {
    return test1_problem(alpha, config.dim, config.boundary.value_or(BoundaryMode::dirichlet_frozen),
                         config.box_lo, config.box_hi);
  }
  if (config.problem == "test2") {
    return test2_problem(alpha, config.dim,
                         config.boundary.value_or(BoundaryMode::dirichlet_from_exact),
                         config.box_lo, config.box_hi);
  }
  throw Error(ErrorKind::configuration, "unknown problem '" + config.problem + "'");
}

SchemeOptions make_options(const RunConfig& config, double alpha, double dt, double h) {
  SchemeOptions o;
  o.alpha = alpha;
  o.dt = dt;
  o.h = h;
  o.flavor = config.scheme;
  o.theta = config.theta;
  o.allow_unstable = config.allow_unstable;
  o.threads = config.threads;
  return o;
}

Oracle make_oracle(const RunConfig& config, double alpha) {
  if (config.problem == "test1") {
    auto sol = std::make_shared<const Test1Solution>(alpha, config.dim);
    return {[sol](double t, const Point& x) { return (*sol)(t, x); }, sol->max_time()};
  }
  if (config.problem == "test2") {
    auto sol = std::make_shared<const Test2Solution>(alpha, config.dim);
    return {[sol](double t, const Point& x) { return (*sol)(t, x); },
            std::numeric_limits<double>::infinity()};
  }
  throw Error(ErrorKind::oracle_unavailable, "no oracle for problem '" + config.problem + "'");
}

RunResult run_single(const RunConfig& config) {
  config.validate();
  json manifest{{"schema_version", kManifestSchemaVersion},
                {"library_version", version()},
                {"config", json::parse(config.to_json())}};
  std::optional<std::filesystem::path> dir;
  if (!config.out.empty()) dir = output_dir(config.out);

  try {
    const Problem problem = make_problem(config, config.alpha);
    const SchemeOptions options = make_options(config, config.alpha, config.dt, config.h);
    const Scheme scheme(problem, options);
    manifest["cfl"] = to_json_value(scheme.cfl());

    std::vector<std::string> warnings;
    if (!scheme.cfl().satisfied) warnings.push_back("CFL condition violated; running because allow_unstable is set");
    if (options.flavor != FluxFlavor::lax_friedrichs) {
      const double p_max = std::isfinite(problem.gradient_radius) ? problem.gradient_radius : 4.0;
      if (auto w = upwind_flavor_warning(scheme.numerical_hamiltonian(), p_max)) warnings.push_back(*w);
    }

    std::vector<StepReport> reports;
    const auto start = std::chrono::steady_clock::now();
    History history = solve(scheme, config.T, &reports);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunResult result{.manifest = {},
                     .final_state = history.levels.back(),
                     .final_time = static_cast<double>(history.last_level()) * config.dt,
                     .comparison_time = {},
                     .linf_error = {},
                     .error_field = {},
                     .reports = {},
                     .cfl = scheme.cfl(),
                     .warnings = {}};

    // comparison against the oracle at the last level it may be evaluated at
    const Oracle oracle = make_oracle(config, config.alpha);
    std::size_t level = history.last_level();
    if (result.final_time > oracle.max_time) {
      level = std::min(level, floor_steps(oracle.max_time, config.dt));
      warnings.push_back("oracle valid only up to t = " + format_real(oracle.max_time) +
                         "; comparison time reduced");
    }
    const double t_cmp = static_cast<double>(level) * config.dt;
    const GridFunction& u = history.levels[level];
    std::vector<double> err(u.size());
    double linf = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      err[k] = std::abs(u[k] - oracle.eval(t_cmp, scheme.grid().node(k)));
      linf = std::max(linf, err[k]);
    }
    result.comparison_time = t_cmp;
    result.linf_error = linf;
    result.error_field = GridFunction(scheme.grid(), std::move(err));

    const bool all_bounds = std::all_of(reports.begin(), reports.end(),
                                        [](const StepReport& s) { return s.bound_satisfied; });
    const bool range_ok = std::none_of(reports.begin(), reports.end(),
                                       [](const StepReport& s) { return s.gradient_range_exceeded; });
    if (!range_ok) warnings.push_back("discrete gradient left the range where the Lipschitz bound holds");
    json steps = json::array();
    for (const auto& s : reports) steps.push_back(to_json_value(s));
    manifest["grid"] = {{"dim", scheme.grid().dim},
                        {"h", scheme.grid().h},
                        {"nodes_per_axis", scheme.grid().nodes_per_axis},
                        {"boundary", to_string(scheme.grid().boundary)}};
    manifest["steps"] = reports.size();
    manifest["final_time"] = result.final_time;
    manifest["stability"] = {{"all_bounds_satisfied", all_bounds},
                             {"gradient_range_respected", range_ok},
                             {"per_step", steps}};
    manifest["comparison"] = {{"time", t_cmp}, {"linf_error", linf}};
    manifest["warnings"] = warnings;
    manifest["wall_clock_seconds"] = wall;
    manifest["error"] = nullptr;
    result.manifest = manifest.dump(2);
    result.reports = std::move(reports);
    result.warnings = std::move(warnings);

    if (dir) {
      std::ostringstream snap;
      write_csv(snap, result.final_state);
      write_text(*dir / "snapshot.csv", snap.str());
      std::ostringstream errs;
      write_csv(errs, *result.error_field, "abs_error");
      write_text(*dir / "error.csv", errs.str());
      write_text(*dir / "manifest.json", result.manifest + "\n");
    }
    return result;
  } catch (const Error& e) {
    if (dir) {
      manifest["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
      write_text(*dir / "manifest.json", manifest.dump(2) + "\n");
    }
    throw;
  }
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) {
    throw Error(ErrorKind::length_mismatch, "fitted_rate: need at least two (h, e) pairs");
  }
  const std::size_t n = h.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(h[k] > 0.0) || !(e[k] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    lx[k] = std::log(h[k]);
    ly[k] = std::log(e[k]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

std::string ErrorTable::to_csv() const {
  std::ostringstream os;
  os << "h,dt,l_inf_error,observed_rate\n";
  for (const auto& r : rows) {
    os << format_real(r.h) << ',' << format_real(r.dt) << ',' << format_real(r.linf_error) << ','
       << (r.observed_rate ? format_real(*r.observed_rate) : std::string()) << '\n';
  }
  return os.str();
}

std::string ErrorTable::to_json() const {
  json rows_j = json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"h", r.h},
                      {"dt", r.dt},
                      {"steps", r.steps},
                      {"l_inf_error", r.linf_error},
                      {"observed_rate", real_or_null(r.observed_rate)},
                      {"dt_rescaled", r.dt_rescaled}});
  }
  json j{{"schema_version", kManifestSchemaVersion},
         {"library_version", version()},
         {"problem", problem},
         {"alpha", alpha},
         {"scheme", to_string(scheme)},
         {"T", T},
         {"comparison_time", comparison_time},
         {"dt_policy", to_string(dt_policy)},
         {"summary_rate", std::isfinite(summary_rate) ? json(summary_rate) : json(nullptr)},
         {"rows", rows_j},
         {"notes", notes}};
  return j.dump(2);
}

ErrorTable run_convergence(const Problem& problem, const LadderOptions& options,
                           const std::function<double(double, const Point&)>& oracle) {
  if (!oracle) throw Error(ErrorKind::oracle_unavailable, "run_convergence: no oracle");
  if (options.ladder.size() < 2) {
    throw Error(ErrorKind::configuration, "run_convergence: ladder needs at least two rungs");
  }
  ErrorTable table;
  table.alpha = options.alpha;
  table.scheme = options.flavor;
  table.problem = problem.name;
  table.T = options.T;
  table.comparison_time = options.T;
  table.dt_policy = options.policy;

  const double theta = options.theta.value_or(default_theta(options.alpha));
  for (double h : options.ladder) {
    ErrorRow row;
    row.h = h;
    const double dt_limit =
        suggest_dt(options.flavor, options.alpha, h, problem.lipschitz_bound, theta, problem.dim) / 0.95;
    if (options.policy == DtPolicy::fixed) {
      row.dt = options.dt;
      if (!cfl_check(options.flavor, options.alpha, row.dt, h, problem.lipschitz_bound, theta, problem.dim)
               .satisfied) {
        row.dt = divide_horizon(options.T, 0.95 * dt_limit);
        row.dt_rescaled = true;
        table.notes.push_back("h = " + format_real(h) + ": dt " + format_real(options.dt) +
                              " violates CFL, reduced to " + format_real(row.dt));
      }
    } else {
      row.dt = divide_horizon(options.T, std::pow(0.5, 1.0 / options.alpha) * dt_limit);
    }
    SchemeOptions so;
    so.alpha = options.alpha;
    so.dt = row.dt;
    so.h = h;
    so.flavor = options.flavor;
    so.theta = options.theta;
    so.threads = options.threads;
    const Scheme scheme(problem, so);
    const History history = solve(scheme, options.T);
    row.steps = history.last_level();
    const GridFunction& u = history.levels.back();
    for (std::size_t k = 0; k < u.size(); ++k) {
      row.linf_error = std::max(row.linf_error, std::abs(u[k] - oracle(options.T, scheme.grid().node(k))));
    }
    if (!table.rows.empty()) {
      const double prev = table.rows.back().linf_error;
      if (prev > 0.0 && row.linf_error > 0.0) row.observed_rate = std::log2(prev / row.linf_error);
    }
    table.rows.push_back(row);
  }
  std::vector<double> hs, es;
  for (const auto& r : table.rows) {
    hs.push_back(r.h);
    es.push_back(r.linf_error);
  }
  table.summary_rate = fitted_rate(hs, es);
  return table;
}

ErrorTable run_convergence(const RunConfig& config) {
  config.validate();
  const Problem problem = make_problem(config, config.alpha);
  const Oracle oracle = make_oracle(config, config.alpha);
  LadderOptions lo;
  lo.alpha = config.alpha;
  lo.flavor = config.scheme;
  lo.theta = config.theta;
  lo.ladder = config.ladder;
  lo.dt = config.dt;
  lo.T = config.T;
  lo.policy = config.dt_policy;
  lo.threads = config.threads;
  std::string reduced_note;
  if (lo.T > oracle.max_time) {
    lo.T = static_cast<double>(floor_steps(oracle.max_time, config.dt)) * config.dt;
    if (!(lo.T > 0.0)) {
      throw Error(ErrorKind::beyond_critical_time,
                  "oracle valid only up to t = " + format_real(oracle.max_time) + ", below one step");
    }
    reduced_note = "comparison time reduced from " + format_real(config.T) + " to " +
                   format_real(lo.T) + " (oracle limit " + format_real(oracle.max_time) + ")";
  }
  ErrorTable table = run_convergence(problem, lo, oracle.eval);
  table.T = config.T;
  if (!reduced_note.empty()) table.notes.insert(table.notes.begin(), reduced_note);

  if (!config.out.empty()) {
    const auto dir = output_dir(config.out);
    write_text(dir / "errors.csv", table.to_csv());
    write_text(dir / "errors.json", table.to_json() + "\n");
  }
  return table;
}

std::string SweepResult::to_csv() const {
  std::ostringstream os;
  const bool two_d = !profiles.empty() && profiles.front().state.spec().dim == 2;
  os << (two_d ? "alpha,x,y,value\n" : "alpha,x,value\n");
  for (const auto& p : profiles) {
    const GridSpec& g = p.state.spec();
    for (std::size_t k = 0; k < p.state.size(); ++k) {
      const Point x = g.node(k);
      os << format_real(p.alpha) << ',' << format_real(x[0]) << ',';
      if (two_d) os << format_real(x[1]) << ',';
      os << format_real(p.state[k]) << '\n';
    }
  }
  return os.str();
}

SweepResult run_alpha_sweep(const RunConfig& config, const std::vector<double>& alphas) {
  config.validate();
  if (alphas.empty()) throw Error(ErrorKind::configuration, "alpha sweep needs at least one alpha");
  std::vector<double> members = alphas;
  for (double a : members) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::configuration, "alphas must lie in (0, 1]");
  }
  members.push_back(1.0);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  SweepResult result;
  for (double a : members) {
    const Scheme scheme(make_problem(config, a), make_options(config, a, config.dt, config.h));
    History history = solve(scheme, config.T);
    result.profiles.push_back({a, history.levels.back()});
  }
  if (!config.out.empty()) {
    const auto dir = output_dir(config.out);
    write_text(dir / "sweep.csv", result.to_csv());
    json j{{"schema_version", kManifestSchemaVersion},
           {"library_version", version()},
           {"config", json::parse(config.to_json())},
           {"alphas", members}};
    write_text(dir / "manifest.json", j.dump(2) + "\n");
  }
  return result;
}

bool PropertySuiteReport::ok() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const SuiteEntry& e) { return e.expected_failure ? !e.passed : e.passed; });
}

std::string PropertySuiteReport::to_json() const {
  json list = json::array();
  for (const auto& e : entries) {
    list.push_back({{"module", e.module},
                    {"name", e.name},
                    {"passed", e.passed},
                    {"expected_failure", e.expected_failure},
                    {"detail", e.detail}});
  }
  json j{{"schema_version", kManifestSchemaVersion},
         {"library_version", version()},
         {"ok", ok()},
         {"entries", list}};
  return j.dump(2);
}

namespace {

class Suite {
 public:
  void add(std::string module, std::string name, bool passed, std::string detail,
           bool expected_failure = false) {
    report_.entries.push_back({std::move(module), std::move(name), passed, expected_failure,
                               std::move(detail)});
  }
  PropertySuiteReport take() { return std::move(report_); }

 private:
  PropertySuiteReport report_;
};

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void caputo_checks(Suite& suite) {
  constexpr std::size_t kMaxN = 2000;
  bool positive = true;
  double sum_dev = 0.0;
  double diff_dev = 0.0;
  double shift_dev = 0.0;
  double seq_dev = 0.0;
  for (int ai = 1; ai <= 10; ++ai) {
    const double alpha = 0.1 * ai;
    WeightSequence seq(alpha, 1.0);
    CaputoWeights prev;
    for (std::size_t n = 0; n <= kMaxN; ++n) {
      const CaputoWeights& w = seq.advance();
      if (n % 97 == 0 || n == kMaxN) {
        const CaputoWeights closed = weights(alpha, n, 1.0);
        for (std::size_t m = 0; m <= n; ++m) seq_dev = std::max(seq_dev, std::abs(closed.c[m] - w.c[m]));
      }
      long double s = 0.0L;
      for (std::size_t m = 0; m <= n; ++m) {
        // c_m = 0 for m < n is the backward difference at α = 1
        if (alpha < 1.0 ? !(w.c[m] > 0.0) : !(w.c[m] >= 0.0)) positive = false;
        s += w.c[m];
      }
      sum_dev = std::max(sum_dev, static_cast<double>(std::abs(s - 1.0L)));
      if (n > 0) {
        diff_dev = std::max(diff_dev, std::abs((w.c[0] - prev.c[0]) + w.c[1]));
        for (std::size_t m = 1; m < n; ++m) shift_dev = std::max(shift_dev, std::abs(w.c[m + 1] - prev.c[m]));
      }
      prev = w;
    }
  }
  const std::string range = " (alpha 0.1..1.0, n <= " + std::to_string(kMaxN) + ")";
  suite.add("caputo", "weights_positive", positive, "c_m > 0 for alpha < 1, >= 0 at alpha = 1" + range);
  suite.add("caputo", "weights_sum_to_one", sum_dev <= 1e-11, "max |sum - 1| = " + sci(sum_dev) + range);
  suite.add("caputo", "c0_difference_identity", diff_dev <= 1e-13, "max deviation " + sci(diff_dev) + range);
  suite.add("caputo", "shift_identity", shift_dev <= 1e-13, "max deviation " + sci(shift_dev) + range);
  suite.add("caputo", "recursive_matches_closed_form", seq_dev <= 1e-13, "max deviation " + sci(seq_dev));

  // exact on f(t) = t
  double lin_dev = 0.0;
  for (double alpha : {0.2, 0.5, 0.9, 1.0}) {
    const double dt = 0.01;
    const std::size_t steps = 50;
    std::vector<double> hist(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) hist[m] = static_cast<double>(m) * dt;
    const double t = static_cast<double>(steps) * dt;
    const double approx = caputo_apply(weights(alpha, steps - 1, dt), hist);
    lin_dev = std::max(lin_dev, std::abs(approx - std::pow(t, 1.0 - alpha) / gamma(2.0 - alpha)));
  }
  suite.add("caputo", "exact_on_linear", lin_dev <= 1e-11, "max deviation " + sci(lin_dev));

  for (double alpha : {0.3, 0.5, 0.8}) {
    const TruncationResult r = truncation_order(alpha, monomial(2));
    suite.add("caputo", "truncation_order_alpha_" + label(alpha),
              std::abs(r.order - (2.0 - alpha)) <= 0.15,
              "order " + format_real(r.order) + " vs " + format_real(2.0 - alpha));
  }
}

void hamiltonian_checks(Suite& suite) {
  const double dt = 1e-3;
  const double h = 0.05;
  const double L = 2.0;
  const CflReport up = cfl_check(FluxFlavor::upwind_nonincreasing, 1.0, dt, h, L, 0.5);
  const CflReport lf = cfl_check(FluxFlavor::lax_friedrichs, 1.0, dt, h, L, 0.5);
  const bool classical = up.lhs == dt * L / h && up.rhs == 1.0 && lf.theta_window &&
                         lf.theta_window->first == L * dt / (2.0 * h) && lf.theta_window->second == 0.5;
  suite.add("hamiltonian", "cfl_alpha1_classical", classical,
            "upwind " + format_real(up.lhs) + " <= " + format_real(up.rhs) + "; LF window [" +
                (lf.theta_window ? format_real(lf.theta_window->first) + ", " +
                                       format_real(lf.theta_window->second)
                                 : std::string("none")) +
                "]");

  NumericalHamiltonian g;
  g.hamiltonian = [](const Point&, std::span<const double> p) { return 0.5 * p[0] * p[0]; };
  g.lipschitz_bound = 2.0;
  g.theta = default_theta(0.5);
  double consistency = 0.0;
  bool monotone = true;
  const double lam = rho_alpha(0.5, suggest_dt(FluxFlavor::lax_friedrichs, 0.5, 0.1, 2.0, g.theta)) / 0.1;
  for (int i = -20; i <= 20; ++i) {
    const double p = 0.1 * i;
    const std::array<double, 2> q{p, p};
    consistency = std::max(consistency, std::abs(flux_eval(g, {}, q, lam) - 0.5 * p * p));
    for (int j = -20; j <= 20; ++j) {
      const double eps = 1e-6;
      const std::array<double, 2> q0{0.1 * i, 0.1 * j};
      const std::array<double, 2> q1{0.1 * i + eps, 0.1 * j};
      const std::array<double, 2> q2{0.1 * i, 0.1 * j + eps};
      // nonincreasing in the forward difference, nondecreasing in the backward one
      if (flux_eval(g, {}, q1, lam) > flux_eval(g, {}, q0, lam) + 1e-15) monotone = false;
      if (flux_eval(g, {}, q2, lam) < flux_eval(g, {}, q0, lam) - 1e-15) monotone = false;
    }
  }
  suite.add("hamiltonian", "lf_consistency", consistency <= 1e-15, "max |g(p,p) - H(p)| = " + sci(consistency));
  suite.add("hamiltonian", "lf_monotone_under_cfl", monotone, "sampled on |q| <= 2");
}

void g_property_checks(Suite& suite, const RunConfig& config, std::size_t trials) {
  for (const char* id : {"test1", "test2"}) {
    RunConfig c = config;
    c.problem = id;
    c.dim = 1;
    const Problem problem = make_problem(c, config.alpha);
    SchemeOptions o = make_options(c, config.alpha, config.dt, config.h);
    o.allow_unstable = false;
    const double theta = o.theta.value_or(default_theta(o.alpha));
    o.dt = std::min(o.dt, suggest_dt(o.flavor, o.alpha, o.h, problem.lipschitz_bound, theta));
    const GPropertyReport r = verify_g_properties(problem, o, trials, config.seed);
    for (const auto& check : r.checks) {
      suite.add("solver", std::string(id) + "_" + check.name, check.passed || check.skipped,
                check.skipped ? "skipped: " + check.note
                              : std::to_string(check.trials - check.failures) + "/" +
                                    std::to_string(check.trials) + " passed, worst slack " +
                                    sci(check.worst_slack));
    }
  }

  // at 50× the CFL Δt the monotonicity trials must break
  RunConfig c = config;
  c.problem = "test1";
  c.dim = 1;
  const Problem problem = make_problem(c, config.alpha);
  SchemeOptions o = make_options(c, config.alpha, config.dt, config.h);
  const double theta = o.theta.value_or(default_theta(o.alpha));
  o.dt = 50.0 * suggest_dt(o.flavor, o.alpha, o.h, problem.lipschitz_bound, theta);
  o.allow_unstable = true;
  const GPropertyReport r = verify_g_properties(problem, o, trials, config.seed);
  const PropertyCheck* mono = r.find("monotone_ordered_inputs");
  suite.add("solver", "monotonicity_breaks_at_50x_cfl", mono && mono->passed,
            mono ? std::to_string(mono->failures) + "/" + std::to_string(mono->trials) +
                       " ordered pairs reversed (expected)"
                 : "missing",
            true);
}

void stability_and_reduction_checks(Suite& suite, const RunConfig& config) {
  for (const char* id : {"test1", "test2"}) {
    for (double alpha : {0.5, 0.8}) {
      RunConfig c = config;
      c.problem = id;
      c.dim = 1;
      const Problem problem = make_problem(c, alpha);
      SchemeOptions o = make_options(c, alpha, 1e-3, 0.1);
      o.allow_unstable = false;
      const double theta = o.theta.value_or(default_theta(alpha));
      const double dt_cfl = suggest_dt(o.flavor, alpha, o.h, problem.lipschitz_bound, theta);
      o.dt = divide_horizon(0.2, std::min(1e-3, dt_cfl));
      std::vector<StepReport> reports;
      solve(problem, o, 0.2, &reports);
      const auto bad = std::count_if(reports.begin(), reports.end(),
                                     [](const StepReport& s) { return !s.bound_satisfied; });
      suite.add("solver", std::string("stability_bound_") + id + "_alpha_" + label(alpha),
                bad == 0, std::to_string(reports.size() - static_cast<std::size_t>(bad)) + "/" +
                              std::to_string(reports.size()) + " steps within the bound");
    }
  }

  // α = 1 against Uⁿ⁺¹ = Uⁿ − Δt g
  for (const char* id : {"test1", "test2"}) {
    RunConfig c = config;
    c.problem = id;
    c.dim = 1;
    const Problem problem = make_problem(c, 1.0);
    SchemeOptions o = make_options(c, 1.0, 1e-3, 0.1);
    o.allow_unstable = false;
    o.theta = 0.5;
    const Scheme scheme(problem, o);
    const History hist = solve(scheme, 0.2);
    double dev = 0.0;
    for (std::size_t n = 0; n + 1 < hist.levels.size(); ++n) {
      const auto flux = scheme.fluxes(hist.levels[n], static_cast<double>(n) * o.dt);
      for (std::size_t k = 0; k < flux.size(); ++k) {
        const double classical = hist.levels[n][k] - o.dt * flux[k];
        dev = std::max(dev, std::abs(hist.levels[n + 1][k] - classical) / std::max(1.0, std::abs(classical)));
      }
    }
    suite.add("solver", std::string("alpha1_reduction_") + id, dev <= 1e-12, "max relative deviation " + sci(dev));
  }

  // thread count must not change a single bit
  {
    RunConfig c = config;
    c.problem = "test1";
    c.dim = 2;
    const Problem problem = make_problem(c, 0.8);
    SchemeOptions o = make_options(c, 0.8, 1e-3, 0.2);
    o.allow_unstable = false;
    o.theta.reset();
    o.threads = 1;
    const History a = solve(problem, o, 0.02);
    o.threads = 4;
    const History b = solve(problem, o, 0.02);
    bool same = true;
    for (std::size_t n = 0; n < a.levels.size(); ++n) {
      same = same && std::equal(a.levels[n].values().begin(), a.levels[n].values().end(),
                                b.levels[n].values().begin());
    }
    suite.add("solver", "deterministic_across_threads", same, "1 vs 4 threads, 2D, 20 steps");
  }
}

void oracle_checks(Suite& suite) {
  for (double alpha : {0.5, 0.8}) {
    const PowerSeries f = f_coefficients(alpha, kDefaultSeriesTerms);
    const double d1 = std::abs(f.coefficient(1) + 2.0 / gamma(alpha + 1.0));
    const double d2 = std::abs(f.coefficient(2) - 8.0 / gamma(2.0 * alpha + 1.0));
    suite.add("exact", "f1_f2_closed_form_alpha_" + label(alpha), d1 <= 1e-13 && d2 <= 1e-13,
              "deviations " + sci(d1) + ", " + sci(d2));
    const Test1Solution sol(alpha);
    const double res = sol.residual(0.5 * sol.critical_time());
    suite.add("exact", "test1_residual_alpha_" + label(alpha), res <= 1e-8,
              "residual " + sci(res) + " at t = 0.5 T_alpha = " + format_real(0.5 * sol.critical_time()));
  }
  {
    const PowerSeries f = f_coefficients(1.0, 40);
    bool exact = true;
    double expected = 1.0;
    for (std::size_t n = 0; n <= 20; ++n, expected *= -2.0) exact = exact && f.coefficient(n) == expected;
    suite.add("exact", "alpha1_coefficients_geometric", exact, "f_n == (-2)^n for n <= 20");
  }
  {
    // few enough terms that truncation, not rounding, dominates
    const Test1Solution sol(0.7);
    const double t = 0.5 * sol.critical_time();
    const double r25 = sol.residual(t, 25);
    const double r50 = sol.residual(t, 50);
    suite.add("exact", "test1_residual_shrinks_with_terms", r50 <= 0.1 * r25,
              "alpha 0.7: " + sci(r25) + " (25 terms) -> " + sci(r50) + " (50 terms)");
  }
  {
    const Test2Solution sol(1.0);
    double dev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double t = 0.05 * i;
        const double x = 0.1 * j;
        dev = std::max(dev, std::abs(sol(t, {x, 0.0}) + (std::abs(x) + t) * (std::abs(x) + t)));
      }
    }
    suite.add("exact", "test2_alpha1_closed_form", dev <= 1e-12, "max deviation " + sci(dev));
  }
  {
    const double t1 = critical_time(1.0);
    suite.add("exact", "critical_time_alpha1", std::abs(t1 - 0.5) <= 0.01, "T_1 = " + format_real(t1));
    bool finite = true;
    std::string values;
    for (int k = 2; k <= 9; ++k) {
      const double a = 0.1 * k;
      const double t = critical_time(a);
      finite = finite && t > 0.0 && std::isfinite(t);
      values += (values.empty() ? "" : ", ") + label(a) + ": " + sci(t);
    }
    suite.add("exact", "critical_time_positive_finite", finite, values);
  }
  {
    // ∂ᵅu = −|Du| along t at a fixed x away from the kink
    double worst = 0.0;
    for (double alpha : {0.5, 0.8, 1.0}) {
      const Test2Solution sol(alpha);
      const double dt = 1e-4;
      const double x = 0.5;
      const std::size_t steps = 1000;
      std::vector<double> hist(steps + 1);
      for (std::size_t m = 0; m <= steps; ++m) hist[m] = sol(static_cast<double>(m) * dt, {x, 0.0});
      const double t = static_cast<double>(steps) * dt;
      const double lhs = caputo_apply(weights(alpha, steps - 1, dt), hist);
      const double grad = 2.0 * x + 2.0 * std::pow(t, alpha) / (alpha * gamma(alpha));
      worst = std::max(worst, std::abs(lhs + grad));
    }
    suite.add("exact", "test2_caputo_self_consistency", worst <= 5e-3, "max |D u + |Du|| = " + sci(worst));
  }
}

}  // namespace

PropertySuiteReport run_property_suite(const RunConfig& config, std::size_t trials) {
  config.validate();
  Suite suite;
  caputo_checks(suite);
  hamiltonian_checks(suite);
  g_property_checks(suite, config, trials);
  stability_and_reduction_checks(suite, config);
  oracle_checks(suite);
  PropertySuiteReport report = suite.take();
  if (!config.out.empty()) {
    write_text(output_dir(config.out) / "properties.json", report.to_json() + "\n");
  }
  return report;
}

}  // namespace frachj
