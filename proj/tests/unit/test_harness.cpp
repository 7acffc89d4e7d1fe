#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frachj/error.hpp"
#include "frachj/exact.hpp"
#include "frachj/harness.hpp"

using namespace frachj;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("frachj_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.problem = "test2";
  c.alpha = 0.7;
  c.theta = 0.2;
  c.boundary = BoundaryMode::periodic;
  c.alphas = {0.5, 0.9};
  c.dt_policy = DtPolicy::cfl_scaled;
  const RunConfig d = RunConfig::from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_EQ(*d.theta, 0.2);
  EXPECT_EQ(*d.boundary, BoundaryMode::periodic);
}

TEST(RunConfig, MergeOverridesOnlyGivenKeys) {
  RunConfig c;
  c.h = 0.05;
  c.merge_json(R"({"alpha": 0.4, "box": [-1, 1]})");
  EXPECT_EQ(c.alpha, 0.4);
  EXPECT_EQ(c.h, 0.05);
  EXPECT_EQ(c.box_lo, -1.0);
}

TEST(RunConfig, RejectsBadInput) {
  EXPECT_THROW(RunConfig::from_json(R"({"alhpa": 0.4})"), Error);
  EXPECT_THROW(RunConfig::from_json("not json"), Error);
  RunConfig c;
  c.ladder = {0.2, 0.1, 0.04};
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.problem = "test3";
  EXPECT_THROW(c.validate(), Error);
}

TEST(RunSingle, ZeroHorizonSnapshotIsInitialCondition) {
  RunConfig c;
  c.problem = "test1";
  c.alpha = 0.6;
  c.T = 0.0;
  const RunResult r = run_single(c);
  const Problem p = make_problem(c, 0.6);
  for (std::size_t k = 0; k < r.final_state.size(); ++k) {
    EXPECT_EQ(r.final_state[k], p.initial(r.final_state.spec().node(k)));
  }
  EXPECT_EQ(*r.linf_error, 0.0);
}

TEST(RunSingle, WritesManifestAndSnapshots) {
  RunConfig c;
  c.problem = "test2";
  c.alpha = 0.5;
  c.T = 0.01;
  c.out = scratch("single").string();
  const RunResult r = run_single(c);
  const auto dir = std::filesystem::path(c.out);
  const std::string manifest = slurp(dir / "manifest.json");
  for (const char* key : {"schema_version", "library_version", "config", "cfl", "stability",
                          "wall_clock_seconds", "comparison"}) {
    EXPECT_NE(manifest.find(std::string("\"") + key + "\""), std::string::npos) << key;
  }
  const std::string snap = slurp(dir / "snapshot.csv");
  EXPECT_EQ(snap.rfind("x,value\n", 0), 0u);
  EXPECT_EQ(std::count(snap.begin(), snap.end(), '\n'), static_cast<long>(r.final_state.size() + 1));
  EXPECT_TRUE(std::filesystem::exists(dir / "error.csv"));
}

TEST(RunSingle, Test2ClassicalErrorScalesLinearly) {
  RunConfig c;
  c.problem = "test2";
  c.alpha = 1.0;
  c.h = 0.1;
  const double coarse = *run_single(c).linf_error;
  c.h = 0.025;
  const double fine = *run_single(c).linf_error;
  EXPECT_LE(fine, 10.0 * c.h);
  EXPECT_LE(fine, coarse / 0.1 * 0.025);
}

TEST(RunSingle, AlphaOneMatchesClassicalPath) {
  RunConfig c;
  c.problem = "test1";
  c.alpha = 1.0;
  const RunResult r = run_single(c);
  // classical explicit LF computed here from the same grid
  const Scheme scheme(make_problem(c, 1.0), make_options(c, 1.0, c.dt, c.h));
  GridFunction u = scheme.initial_condition();
  for (std::size_t n = 0; n < 200; ++n) {
    const auto g = scheme.fluxes(u, static_cast<double>(n) * c.dt);
    std::vector<double> next(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) next[k] = u[k] - c.dt * g[k];
    u = GridFunction(u.spec(), std::move(next));
  }
  double err = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    err = std::max(err, std::abs(u[k] - test1_classical(0.2, u.spec().node(k))));
  }
  EXPECT_NEAR(*r.linf_error, err, 1e-12);
}

TEST(RunSingle, CflViolationSurfacesAsError) {
  RunConfig c;
  c.problem = "test1";
  c.alpha = 0.5;
  c.dt = 0.05;
  c.T = 0.1;
  try {
    run_single(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code(e.kind()), kExitCfl);
  }
}

TEST(Convergence, ZeroHamiltonianIsExactOnEveryRung) {
  Problem p;
  p.name = "zero";
  p.hamiltonian = [](const Point&, std::span<const double>) { return 0.0; };
  p.lipschitz_bound = 1.0;
  p.initial = [](const Point& x) { return std::cos(x[0]); };
  p.boundary = BoundaryMode::dirichlet_frozen;
  LadderOptions lo;
  lo.alpha = 0.6;
  lo.flavor = FluxFlavor::upwind_nonincreasing;  // no viscosity: zero flux
  lo.ladder = {0.2, 0.1, 0.05, 0.025};
  lo.T = 0.1;
  const ErrorTable t = run_convergence(p, lo, [&](double, const Point& x) { return p.initial(x); });
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& r : t.rows) EXPECT_LE(r.linf_error, 1e-13);
}

TEST(Convergence, TableRatesAndCsv) {
  RunConfig c;
  c.problem = "test2";
  c.alpha = 0.8;
  const ErrorTable t = run_convergence(c);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_FALSE(t.rows[0].observed_rate);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_DOUBLE_EQ(*t.rows[k].observed_rate, std::log2(t.rows[k - 1].linf_error / t.rows[k].linf_error));
  }
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.rfind("h,dt,l_inf_error,observed_rate\n0.20000000000000001,0.001,", 0), 0u);
}

TEST(Convergence, FixedDtFallsBackToCflOnFineRungs) {
  RunConfig c;
  c.problem = "test2";
  c.alpha = 0.5;
  const ErrorTable t = run_convergence(c);
  EXPECT_FALSE(t.rows[0].dt_rescaled);
  EXPECT_TRUE(t.rows[3].dt_rescaled);
  EXPECT_LT(t.rows[3].dt, 1e-3);
  EXPECT_FALSE(t.notes.empty());
}

TEST(Convergence, Test1ComparisonTimeIsReducedForSmallAlpha) {
  RunConfig c;
  c.problem = "test1";
  c.alpha = 0.5;
  c.ladder = {0.2, 0.1};
  const ErrorTable t = run_convergence(c);
  EXPECT_LT(t.comparison_time, 0.95 * critical_time(0.5));
  EXPECT_EQ(t.T, 0.2);
  EXPECT_NE(t.notes.front().find("reduced"), std::string::npos);
}

TEST(FittedRate, ExactPowerLaw) {
  EXPECT_NEAR(fitted_rate({0.4, 0.2, 0.1}, {0.8, 0.2, 0.05}), 2.0, 1e-12);
  EXPECT_THROW(fitted_rate({0.1}, {0.1}), Error);
}

TEST(Sweep, EmptyListIsConfigurationError) {
  RunConfig c;
  try {
    run_alpha_sweep(c, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
  }
}

TEST(Sweep, ProfilesApproachAlphaOne) {
  RunConfig c;
  c.problem = "test2";
  const SweepResult s = run_alpha_sweep(c, {0.5, 0.7, 0.9, 1.0});
  ASSERT_EQ(s.profiles.size(), 4u);
  const auto& one = s.profiles.back().state;
  EXPECT_LT(sup_distance(s.profiles[2].state, one), sup_distance(s.profiles[0].state, one));
  EXPECT_EQ(s.to_csv().rfind("alpha,x,value\n", 0), 0u);
}

TEST(Sweep, AlphaOneReproducesSolverOutput) {
  RunConfig c;
  c.problem = "test1";
  const SweepResult s = run_alpha_sweep(c, {1.0});
  ASSERT_EQ(s.profiles.size(), 1u);
  const History h = solve(make_problem(c, 1.0), make_options(c, 1.0, c.dt, c.h), c.T);
  for (std::size_t k = 0; k < h.levels.back().size(); ++k) {
    EXPECT_EQ(s.profiles[0].state[k], h.levels.back()[k]);
  }
}

TEST(PropertySuite, PassesAndIsReproducible) {
  RunConfig c;
  c.alpha = 0.5;
  const PropertySuiteReport a = run_property_suite(c, 100);
  EXPECT_TRUE(a.ok()) << a.to_json();
  const PropertySuiteReport b = run_property_suite(c, 100);
  EXPECT_EQ(a.to_json(), b.to_json());
  bool has_expected_failure = false;
  for (const auto& e : a.entries) has_expected_failure = has_expected_failure || e.expected_failure;
  EXPECT_TRUE(has_expected_failure);
}
