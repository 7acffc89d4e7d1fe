// Command-line driver: run, converge, sweep, verify.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frachj/error.hpp"
#include "frachj/harness.hpp"

namespace {

// Flag values; only flags actually given override the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> problem;
  std::optional<double> alpha;
  std::optional<std::string> scheme;
  std::optional<double> theta;
  std::optional<double> dt;
  std::optional<double> h;
  std::optional<double> T;
  std::optional<int> dim;
  std::vector<double> box;
  std::optional<std::string> boundary;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool allow_unstable = false;
  std::optional<unsigned> threads;
  std::vector<double> ladder;
  std::optional<std::string> dt_policy;
  std::vector<double> alphas;
  std::optional<std::size_t> trials;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--config", f.config, "JSON config file; flags override its keys");
  cmd->add_option("--problem", f.problem, "test1 | test2");
  cmd->add_option("--alpha", f.alpha, "fractional order in (0, 1]");
  cmd->add_option("--scheme", f.scheme, "lax_friedrichs | upwind_nonincreasing | upwind_nondecreasing");
  cmd->add_option("--theta", f.theta, "Lax-Friedrichs viscosity (default 1 - 2^-alpha)");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--h", f.h, "mesh size");
  cmd->add_option("--T", f.T, "final time");
  cmd->add_option("--dim", f.dim, "spatial dimension (1 or 2)");
  cmd->add_option("--box", f.box, "box extents: lo hi")->expected(2);
  cmd->add_option("--boundary", f.boundary, "periodic | dirichlet_from_exact | dirichlet_frozen");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
  cmd->add_flag("--allow-unstable", f.allow_unstable, "run even when the CFL condition fails");
  cmd->add_option("--threads", f.threads, "worker threads per step");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw frachj::Error(frachj::ErrorKind::configuration, "cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

frachj::RunConfig build_config(const Flags& f) {
  frachj::RunConfig c;
  if (f.config) c.merge_json(read_file(*f.config));
  if (f.problem) c.problem = *f.problem;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.scheme) c.scheme = frachj::parse_flux_flavor(*f.scheme);
  if (f.theta) c.theta = *f.theta;
  if (f.dt) c.dt = *f.dt;
  if (f.h) c.h = *f.h;
  if (f.T) c.T = *f.T;
  if (f.dim) c.dim = *f.dim;
  if (f.box.size() == 2) {
    c.box_lo = f.box[0];
    c.box_hi = f.box[1];
  }
  if (f.boundary) c.boundary = frachj::parse_boundary_mode(*f.boundary);
  if (f.out) c.out = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.allow_unstable) c.allow_unstable = true;
  if (f.threads) c.threads = *f.threads;
  if (!f.ladder.empty()) c.ladder = f.ladder;
  if (f.dt_policy) c.dt_policy = frachj::parse_dt_policy(*f.dt_policy);
  if (!f.alphas.empty()) c.alphas = f.alphas;
  if (f.trials) c.trials = *f.trials;
  c.validate();
  return c;
}

int cmd_run(const frachj::RunConfig& c) {
  const frachj::RunResult r = frachj::run_single(c);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "steps " << r.reports.size() << ", final time " << frachj::format_real(r.final_time)
            << '\n';
  if (r.linf_error) {
    std::cout << "l_inf error " << frachj::format_real(*r.linf_error) << " at t = "
              << frachj::format_real(*r.comparison_time) << '\n';
  }
  if (!c.out.empty()) std::cout << "wrote " << c.out << "/{manifest.json,snapshot.csv,error.csv}\n";
  return frachj::kExitOk;
}

int cmd_converge(const frachj::RunConfig& c) {
  const frachj::ErrorTable t = frachj::run_convergence(c);
  for (const auto& n : t.notes) std::cerr << "note: " << n << '\n';
  std::cout << t.to_csv();
  std::cout << "summary_rate " << frachj::format_real(t.summary_rate) << '\n';
  return frachj::kExitOk;
}

int cmd_sweep(const frachj::RunConfig& c) {
  const frachj::SweepResult s = frachj::run_alpha_sweep(c, c.alphas);
  if (c.out.empty()) {
    std::cout << s.to_csv();
  } else {
    std::cout << "wrote " << s.profiles.size() << " profiles to " << c.out << "/sweep.csv\n";
  }
  return frachj::kExitOk;
}

int cmd_verify(const frachj::RunConfig& c) {
  const frachj::PropertySuiteReport r = frachj::run_property_suite(c, c.trials);
  for (const auto& e : r.entries) {
    const bool good = e.expected_failure ? !e.passed : e.passed;
    std::printf("%-5s %-11s %-40s %s%s\n", good ? "ok" : "FAIL", e.module.c_str(), e.name.c_str(),
                e.detail.c_str(), e.expected_failure ? " [expected failure]" : "");
  }
  return r.ok() ? frachj::kExitOk : frachj::kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit solver for time-fractional Hamilton-Jacobi equations"};
  app.set_version_flag("--version", std::string(frachj::version()));
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h is the mesh size

  Flags f;
  auto* run = app.add_subcommand("run", "solve once and write manifest and snapshots");
  auto* converge = app.add_subcommand("converge", "refinement study against the exact solution");
  auto* sweep = app.add_subcommand("sweep", "final-time profiles for several alpha");
  auto* verify = app.add_subcommand("verify", "property suite; exit 5 on failure");
  for (auto* cmd : {run, converge, sweep, verify}) add_common(cmd, f);
  converge->add_option("--ladder", f.ladder, "mesh sizes, each half the previous");
  converge->add_option("--dt-policy", f.dt_policy, "fixed | cfl_scaled");
  sweep->add_option("--alphas", f.alphas, "alpha values; 1 is always added");
  verify->add_option("--trials", f.trials, "randomized trials per property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? frachj::kExitOk : frachj::kExitConfig;
  }

  try {
    const frachj::RunConfig c = build_config(f);
    if (*run) return cmd_run(c);
    if (*converge) return cmd_converge(c);
    if (*sweep) return cmd_sweep(c);
    return cmd_verify(c);
  } catch (const frachj::Error& e) {
    std::cerr << "error (" << frachj::to_string(e.kind()) << "): " << e.what() << '\n';
    return frachj::exit_code(e.kind());
  }
}
