#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"

using namespace ddsl;

namespace {

const char* kBase = R"(# comment
[simulation]
case = I
L = 1
T = 0.25
N = 8
dx = 0.03125
dv = 0.03125
U0 = 6
epsilon0 = 1e-8
integrator = sem
seed = 5

[field]
kind = cosine
amplitude = 1

[sigma]
kinds = sine, constant
amplitudes = 0.5, 0.25

[initial]
kind = landau
alpha = 0.05
)";

SimulationConfig parse(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parse_config(in, overrides);
}

void check_same(const SimulationConfig& a, const SimulationConfig& b) {
  CHECK(a.field_case == b.field_case);
  CHECK(a.L == b.L);
  CHECK(a.T == b.T);
  CHECK(a.N == b.N);
  CHECK(a.dx == b.dx);
  CHECK(a.dv == b.dv);
  CHECK(a.U0 == b.U0);
  CHECK(a.epsilon0 == b.epsilon0);
  CHECK(a.integrator == b.integrator);
  CHECK(a.reconstruction == b.reconstruction);
  CHECK(a.domain == b.domain);
  CHECK(a.field_kind == b.field_kind);
  CHECK(a.field_amplitude == b.field_amplitude);
  CHECK(a.sigma == b.sigma);
  CHECK(a.initial == b.initial);
  CHECK(a.alpha == b.alpha);
  CHECK(a.seed == b.seed);
  CHECK(a.snapshot_every == b.snapshot_every);
  CHECK(a.samples == b.samples);
  CHECK(a.levels == b.levels);
  CHECK(a.error_window == b.error_window);
  CHECK(a.node_budget == b.node_budget);
  CHECK(a.repetitions == b.repetitions);
  CHECK(a.threads == b.threads);
}

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    (void)parse(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config parses with defaults") {
  const auto c = parse(kBase);
  CHECK(c.N == 8);
  CHECK(c.integrator == IntegratorKind::SEM);
  CHECK(c.reconstruction == Reconstruction::Linear);
  CHECK(c.domain == DomainPolicy::Adaptive);
  REQUIRE(c.K() == 2);
  CHECK(c.sigma[0] == SigmaSpec{SigmaKind::Sine, 0.5});
  CHECK(c.sigma[1] == SigmaSpec{SigmaKind::Constant, 0.25});
  CHECK(c.seed == 5);
}

TEST_CASE("config round trip") {
  auto c = parse(kBase, {"simulation.reconstruction=spline", "simulation.domain=nonadaptive",
                         "experiment.samples=12", "simulation.epsilon0=6.398e-9",
                         "field.amplitude=0.1"});
  c.alpha = 0.1 + 0.2;  // not exactly representable in short decimal
  const auto back = parse(config_text(c));
  check_same(c, back);
  CHECK(config_hash(c) == config_hash(back));
  c.seed += 1;
  CHECK(config_hash(c) != config_hash(back));

  SimulationConfig two;
  two.field_case = FieldCase::II;
  two.initial = InitialKind::TwoStream;
  two.U0 = 0.0;
  two.sigma = {{SigmaKind::ShiftedCosine, 1.0}};
  const auto back2 = parse(config_text(two));
  check_same(two, back2);
}

TEST_CASE("unknown keys and sections are rejected") {
  const auto e1 = error_of(std::string(kBase) + "\n[simulation2]\nx = 1\n");
  CHECK(e1.find("simulation2") != std::string::npos);
  std::string typo = kBase;
  typo.replace(typo.find("seed = 5"), 8, "sede = 5");
  const auto e2 = error_of(typo);
  CHECK(e2.find("simulation.sede") != std::string::npos);
  CHECK(error_of(kBase, {"simulation.foo=1"}).find("simulation.foo") != std::string::npos);
}

TEST_CASE("missing keys are listed together") {
  const auto e = error_of("[simulation]\nL = 1\n[initial]\nalpha = 0.1\n");
  for (const char* key : {"simulation.T", "simulation.N", "simulation.dx", "simulation.dv",
                          "simulation.epsilon0", "simulation.integrator", "initial.kind",
                          "field.kind"})
    CHECK_MESSAGE(e.find(key) != std::string::npos, key);
}

TEST_CASE("bad values are config errors") {
  CHECK_FALSE(error_of(kBase, {"simulation.N=-3"}).empty());
  CHECK_FALSE(error_of(kBase, {"simulation.dx=0.03"}).empty());  // misaligned
  CHECK_FALSE(error_of(kBase, {"simulation.integrator=rk4"}).empty());
  CHECK_FALSE(error_of(kBase, {"sigma.amplitudes=1"}).empty());  // length mismatch
  CHECK_FALSE(error_of(kBase, {"initial.kind=custom"}).empty());
  CHECK_FALSE(error_of(kBase, {"epsilon0=1"}).empty());
  CHECK_FALSE(error_of(kBase, {"simulation.T=abc"}).empty());
  CHECK_FALSE(error_of("[simulation\nL=1").empty());
  CHECK_THROWS_AS((void)load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("time series CSV") {
  auto cfg = parse(kBase);
  const auto r = run(cfg);
  std::stringstream s;
  write_timeseries(s, r, cfg);
  const std::string text = s.str();
  CHECK(text.rfind("# cfg_hash=", 0) == 0);
  CHECK(text.find("seed=5") != std::string::npos);
  CHECK(text.find("\nt,mass,l1,l2,momentum,kinetic,potential,total,U,grew\n") != std::string::npos);
  const auto ts = read_timeseries(s);
  REQUIRE(ts.rows.size() == cfg.N + 1);
  for (std::size_t n = 0; n <= cfg.N; ++n) {
    CHECK(ts.rows[n].t == r.diagnostics[n].t);
    CHECK(ts.rows[n].kinetic == r.diagnostics[n].kinetic);
    CHECK(ts.rows[n].U == r.diagnostics[n].U);
    CHECK(ts.rows[n].grew == r.diagnostics[n].grew);
  }

  // The constant field has no potential; the CSV says nan.
  cfg.field_kind = FieldKind::Constant;
  const auto rc = run(cfg);
  std::stringstream c;
  write_timeseries(c, rc, cfg);
  CHECK(c.str().find(",nan,nan,") != std::string::npos);
  const auto tc = read_timeseries(c);
  CHECK(std::isnan(tc.rows.back().potential));
  std::istringstream bad("t,mass\n1,2\n");
  CHECK_THROWS((void)read_timeseries(bad));
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
  for (unsigned threads : {1u, 3u}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    try {
      parallel_for(20, threads, [](std::size_t i) {
        if (i == 7 || i == 13) throw std::runtime_error("fail " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "fail 7");
    }
  }
}

TEST_CASE("convergence study couples paths and rejects oversized grids") {
  auto cfg = parse(kBase);
  const auto r = run_convergence_study(cfg, 3, 2);
  REQUIRE(r.levels.size() == 3);
  REQUIRE(r.errors.size() == 2);
  REQUIRE(r.orders.size() == 1);
  const auto finest = sample_path(cfg.K(), cfg.N * 4, cfg.tau() / 4, cfg.seed);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(r.levels[l].N == cfg.N << l);
    CHECK(r.levels[l].dx == cfg.dx / (1 << l));
    CHECK(r.levels[l].path_checksum == coarsen(finest, std::size_t{1} << (2 - l)).checksum());
  }
  for (double e : r.errors) CHECK(e > 0.0);

  cfg.node_budget = 1000;
  CHECK_THROWS_AS((void)run_convergence_study(cfg, 3, 2), ConfigError);
  cfg.node_budget = 2e8;
  CHECK_THROWS_AS((void)run_convergence_study(cfg, 1, 2), ConfigError);
}

TEST_CASE("deterministic convergence sub-case has no sample variance") {
  auto cfg = parse(kBase, {"sigma.kinds=sine", "sigma.amplitudes=0", "simulation.T=0.5",
                           "simulation.N=16"});
  const auto one = run_convergence_study(cfg, 3, 1);
  const auto three = run_convergence_study(cfg, 3, 3, 2);
  for (std::size_t l = 0; l < one.errors.size(); ++l)
    CHECK(three.errors[l] == doctest::Approx(one.errors[l]).epsilon(1e-12));
  INFO("orders " << one.orders[0] << ", errors " << one.errors[0] << " " << one.errors[1]);
  CHECK(one.orders[0] >= 0.7);
  CHECK(one.orders[0] <= 1.3);
}

TEST_CASE("Monte Carlo") {
  auto cfg = parse(kBase, {"field.kind=constant", "sigma.kinds=constant", "sigma.amplitudes=1"});
  CHECK_THROWS_AS((void)run_monte_carlo(cfg, 1), ConfigError);
  const auto a = run_monte_carlo(cfg, 4, 2);
  const auto b = run_monte_carlo(cfg, 4, 1);
  REQUIRE(a.t.size() == cfg.N + 1);
  CHECK(a.samples == 4);
  for (std::size_t n = 0; n <= cfg.N; ++n) {
    CHECK(a.kinetic[n].mean == b.kinetic[n].mean);
    CHECK(a.kinetic[n].se >= 0.0);
    REQUIRE(a.reference[n].momentum);
  }
  CHECK(a.kinetic[0].se == 0.0);
  CHECK(a.min_value >= 0.0);
  std::ostringstream out;
  write_monte_carlo(out, a, cfg);
  CHECK(out.str().find("cfg_hash=") != std::string::npos);
}

TEST_CASE("timing study rows") {
  auto cfg = parse(kBase);
  const auto rows = run_timing_study({cfg}, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].N == cfg.N);
  CHECK(rows[0].ratio == doctest::Approx(rows[0].nonadaptive_seconds / rows[0].adaptive_seconds));
  CHECK(rows[0].adaptive_final_U <= rows[0].nonadaptive_final_U);
  std::ostringstream out;
  write_timing(out, rows);
  CHECK_FALSE(out.str().empty());
}
