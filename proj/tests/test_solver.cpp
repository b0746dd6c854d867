#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ddsl/errors.hpp"
#include "ddsl/solver.hpp"

using namespace ddsl;
using std::numbers::pi;

namespace {

SimulationConfig small_case_one() {
  SimulationConfig cfg;
  cfg.L = 1.0;
  cfg.T = 0.25;
  cfg.N = 16;
  cfg.dx = cfg.dv = 1.0 / 32;
  cfg.U0 = 6.0;
  cfg.epsilon0 = 1e-8;
  cfg.field_kind = FieldKind::Cosine;
  cfg.field_amplitude = 1.0;
  cfg.sigma = {{SigmaKind::Sine, 0.5}};
  cfg.initial = InitialKind::Landau;
  cfg.alpha = 0.05;
  return cfg;
}

bool same_values(const DensityField& a, const DensityField& b) {
  return a.grid().nv() == b.grid().nv() &&
         std::ranges::equal(a.values(), b.values());
}

}  // namespace

TEST_CASE("initial densities") {
  CHECK(initial_density_landau(0, 0, 0.05, 1) == doctest::Approx(1.05 / std::sqrt(2 * pi)));
  CHECK(initial_density_landau(0, 6, 0.05, 1) == doctest::Approx(6.4e-9).epsilon(0.01));
  for (double x : {0.0, 0.3, 0.77}) {
    CHECK(initial_density_two_stream(x, 0.0, 0.05, 1) == 0.0);
    CHECK(initial_density_two_stream(x, 1.3, 0.05, 1) == initial_density_two_stream(x, -1.3, 0.05, 1));
  }
}

TEST_CASE("choose_U0") {
  auto f0 = [](double x, double v) { return initial_density_landau(x, v, 0.05, 1.0); };
  const double dv = 1.0 / 64;
  const double U0 = choose_U0(f0, 1.0, 1e-8, dv);
  CHECK(std::abs(U0 - 6.0) <= 0.1);
  CHECK(f0(0.0, U0) < 1e-8);
  CHECK(f0(0.0, U0 - dv) >= 1e-8);
  CHECK(std::abs(U0 / dv - std::round(U0 / dv)) < 1e-12);
  double prev = U0;
  for (double eps = 2e-8; eps < 1e-2; eps *= 2) {
    const double U = choose_U0(f0, 1.0, eps, dv);
    CHECK(U <= prev);
    prev = U;
  }
  CHECK_THROWS_AS(choose_U0([](double, double) { return 1.0; }, 1.0, 1e-8, dv), ConfigError);
}

TEST_CASE("N = 0 returns the initial sampling") {
  auto cfg = small_case_one();
  cfg.N = 0;
  const auto r = run(cfg);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].t == 0.0);
  CHECK(same_values(r.final_field, initial_field(cfg)));
}

TEST_CASE("velocity-only data is invariant under free transport") {
  SimulationConfig cfg = small_case_one();
  cfg.field_kind = FieldKind::Constant;
  cfg.field_amplitude = 0.0;
  cfg.sigma.clear();
  cfg.initial = InitialKind::Custom;
  cfg.custom_initial = [](double, double v) { return std::exp(-v * v / 2); };
  for (auto kind : {IntegratorKind::SEM, IntegratorKind::LTSM, IntegratorKind::SSM,
                    IntegratorKind::EM_BASELINE}) {
    cfg.integrator = kind;
    const auto r = run(cfg);
    const auto f0 = initial_field(cfg);
    REQUIRE(r.final_field.grid().nv() == f0.grid().nv());
    double worst = 0.0;
    for (std::size_t i = 0; i < f0.values().size(); ++i)
      worst = std::max(worst, std::abs(r.final_field.values()[i] - f0.values()[i]));
    // Convex weights of equal corners reproduce the value up to rounding.
    CHECK(worst <= 1e-15);
    CHECK(r.growth_log.empty());
  }
}

TEST_CASE("without noise the run is deterministic and seed independent") {
  auto cfg = small_case_one();
  cfg.sigma = {{SigmaKind::Sine, 0.0}};
  cfg.seed = 1;
  const auto a = run(cfg);
  const auto b = run(cfg);
  cfg.seed = 987654321;
  const auto c = run(cfg);
  CHECK(same_values(a.final_field, b.final_field));
  CHECK(same_values(a.final_field, c.final_field));
  for (std::size_t n = 0; n < a.diagnostics.size(); ++n) {
    CHECK(a.diagnostics[n].mass == c.diagnostics[n].mass);
    CHECK(a.diagnostics[n].kinetic == c.diagnostics[n].kinetic);
  }
}

TEST_CASE("noisy runs are reproducible from the seed") {
  auto cfg = small_case_one();
  cfg.seed = 42;
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(same_values(a.final_field, b.final_field));
  REQUIRE(a.diagnostics.size() == cfg.N + 1);
  for (std::size_t n = 0; n <= cfg.N; ++n) CHECK(a.diagnostics[n].l2 == b.diagnostics[n].l2);
  cfg.seed = 43;
  CHECK_FALSE(same_values(run(cfg).final_field, a.final_field));
}

TEST_CASE("adaptive growth is bounded by the accumulated displacement") {
  auto cfg = small_case_one();
  cfg.dx = cfg.dv = 1.0 / 64;
  cfg.T = 1.0;
  cfg.N = 64;
  cfg.sigma = {{SigmaKind::Sine, 0.5}};
  const auto inc = sample_increments(cfg, 7);
  const auto r = run(cfg, inc);
  double bound = cfg.U0, grown = cfg.U0;
  for (std::size_t n = 0; n < cfg.N; ++n) {
    const auto db = inc.step(n);
    bound += cfg.dv * std::ceil(displacement_bound(cfg.tau(), 1.0, std::vector<double>{0.5}, db) / cfg.dv);
  }
  for (const auto& e : r.growth_log) grown += e.Xi;
  const double U_N = r.final_field.grid().U();
  CHECK(U_N <= bound + 1e-12);
  CHECK(U_N == doctest::Approx(grown).epsilon(1e-14));
  CHECK(r.diagnostics.back().U == U_N);
  CHECK(r.min_value >= 0.0);
}

TEST_CASE("fixed domain never grows") {
  auto cfg = small_case_one();
  cfg.domain = DomainPolicy::Fixed;
  cfg.U0 = 1.0;  // far too small on purpose
  const auto r = run(cfg);
  CHECK(r.growth_log.empty());
  CHECK(r.final_field.grid().U() == 1.0);
}

TEST_CASE("non-adaptive baseline") {
  CHECK(truncation_level(0.01) == doctest::Approx(std::sqrt(0.02 * std::log(100.0))));
  auto cfg = small_case_one();
  SUBCASE("without noise the domain grows by ceil(tau Emax / dv) each step") {
    cfg.sigma.clear();
    const auto r = run_nonadaptive(cfg, sample_increments(cfg, 1));
    const double cells = std::ceil(cfg.tau() * 1.0 / cfg.dv);
    CHECK(r.growth_log.size() == cfg.N);
    CHECK(r.final_field.grid().U() == doctest::Approx(cfg.U0 + cfg.N * cells * cfg.dv));
  }
  SUBCASE("with noise the growth includes the truncation level") {
    const auto r = run_nonadaptive(cfg, sample_increments(cfg, 1));
    const double cells =
        std::ceil((cfg.tau() * 1.0 + truncation_level(cfg.tau()) * 0.5) / cfg.dv);
    CHECK(r.final_field.grid().U() == doctest::Approx(cfg.U0 + cfg.N * cells * cfg.dv));
    CHECK(r.min_value >= 0.0);
  }
}

TEST_CASE("one step matches a node-by-node reference") {
  for (auto fc : {FieldCase::I, FieldCase::II}) {
    for (auto kind : {IntegratorKind::SEM, IntegratorKind::LTSM, IntegratorKind::SSM,
                      IntegratorKind::EM_BASELINE}) {
      for (auto rec : {Reconstruction::Linear, Reconstruction::Spline}) {
        auto cfg = small_case_one();
        cfg.field_case = fc;
        cfg.integrator = kind;
        cfg.reconstruction = rec;
        cfg.sigma = {{SigmaKind::Sine, 0.5}, {SigmaKind::Constant, 0.3}};
        const auto inc = sample_increments(cfg, 3);
        const auto f0 = initial_field(cfg);
        StepInfo info;
        const auto f1 = step(f0, 1, inc, cfg, &info);

        const FieldEval E = fc == FieldCase::II
                                ? field_eval(solve_field(density_rho(f0), cfg.L), cfg.L)
                                : FieldEval::analytic(cfg.case_one().form(), cfg.L);
        const auto sigma = make_sigma(cfg.sigma, cfg.L);
        const auto db = inc.step(0);
        const SplineInterpolant S(f0);
        const auto& g = f1.grid();
        double worst = 0.0;
        for (std::size_t j = 0; j < g.nx(); ++j) {
          for (std::size_t k = 0; k < g.nv(); ++k) {
            const auto p = inverse_step(kind, {g.x(j), g.v(k)}, cfg.tau(), 0.0, E, sigma, db);
            const double ref =
                rec == Reconstruction::Linear ? interp_linear(f0, p.x, p.v) : S(p.x, p.v);
            worst = std::max(worst, std::abs(f1(j, k) - ref));
          }
        }
        INFO("case " << (fc == FieldCase::I ? "I" : "II") << " " << to_string(kind) << " "
                     << to_string(rec));
        CHECK(worst <= 1e-12);
      }
    }
  }
}

TEST_CASE("mass drift per step stays below 1e-3") {
  auto cfg = small_case_one();
  cfg.initial = InitialKind::TwoStream;
  cfg.field_case = FieldCase::II;
  cfg.sigma = {{SigmaKind::Constant, 1.0}};
  cfg.dx = cfg.dv = 0.02;
  cfg.T = 0.5;
  cfg.N = 25;
  const auto r = run(cfg);
  for (std::size_t n = 1; n < r.diagnostics.size(); ++n)
    CHECK(std::abs(r.diagnostics[n].mass - r.diagnostics[n - 1].mass) <= 1e-3);
  CHECK(r.min_value >= 0.0);
}

TEST_CASE("non-finite values abort with the step index") {
  auto cfg = small_case_one();
  cfg.initial = InitialKind::Custom;
  cfg.custom_initial = [](double, double) { return std::numeric_limits<double>::quiet_NaN(); };
  try {
    (void)run(cfg);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.step() == 0);
  }

  // Alternating data near the overflow limit: the spline coefficients overflow
  // during the first step.
  cfg.reconstruction = Reconstruction::Spline;
  cfg.U0 = 0.5;
  const double h = cfg.dx;
  cfg.custom_initial = [h](double x, double v) {
    const long parity = std::lround(x / h) + std::lround(v / h);
    return (parity % 2 == 0 ? 1.0 : -1.0) * 1.5e308;
  };
  cfg.sigma.clear();
  cfg.field_amplitude = 0.0;
  RunOptions no_diag;
  no_diag.diagnostics = false;
  try {
    (void)run(cfg, no_diag);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("snapshots follow the schedule") {
  auto cfg = small_case_one();
  cfg.snapshot_every = 5;
  RunOptions opts;
  opts.keep_snapshots = true;
  const auto r = run(cfg, opts);
  REQUIRE(r.snapshots.size() == 4);  // steps 0, 5, 10, 15
  CHECK(r.snapshots[1].t == doctest::Approx(5 * cfg.tau()));
  CHECK(same_values(r.snapshots[0].field, initial_field(cfg)));
}

TEST_CASE("increment shape is checked") {
  auto cfg = small_case_one();
  CHECK_THROWS_AS((void)run(cfg, sample_path(2, cfg.N, cfg.tau(), 1)), ConfigError);
  CHECK_THROWS_AS((void)run(cfg, sample_path(1, cfg.N + 1, cfg.tau(), 1)), ConfigError);
}
