#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ddsl/harness.hpp"
#include "gen.hpp"

using namespace ddsl;

namespace {

IntegratorKind any_integrator(gen::Gen& g) {
  constexpr IntegratorKind kinds[] = {IntegratorKind::SEM, IntegratorKind::LTSM,
                                      IntegratorKind::SSM, IntegratorKind::EM_BASELINE};
  return kinds[g.index(0, 3)];
}

std::vector<SigmaSpec> any_sigma(gen::Gen& g) {
  std::vector<SigmaSpec> s;
  const std::size_t K = g.index(0, 3);
  for (std::size_t k = 0; k < K; ++k)
    s.push_back({static_cast<SigmaKind>(g.index(0, 2)), g.uniform(0.0, 1.5)});
  return s;
}

SimulationConfig any_config(gen::Gen& g) {
  SimulationConfig c;
  c.field_case = g.coin() ? FieldCase::I : FieldCase::II;
  c.L = g.coin() ? 1.0 : 2.0;
  const double h = 1.0 / static_cast<double>(std::size_t{1} << g.index(3, 5));
  c.dx = c.L * h;
  c.dv = h;
  c.N = g.index(1, 6);
  c.T = g.uniform(0.05, 0.5);
  c.U0 = 4.0;
  c.epsilon0 = std::pow(10.0, -g.uniform(3, 10));
  c.integrator = any_integrator(g);
  c.domain = static_cast<DomainPolicy>(g.index(0, 2));
  c.field_kind = static_cast<FieldKind>(g.index(0, 2));
  c.field_amplitude = g.uniform(-1.0, 1.0);
  c.sigma = any_sigma(g);
  c.initial = g.coin() ? InitialKind::Landau : InitialKind::TwoStream;
  c.alpha = g.uniform(0.0, 0.5);
  c.seed = g.index(0, 1u << 30);
  return c;
}

}  // namespace

TEST_CASE("property: linear steps obey the discrete maximum principle") {
  gen::Gen g(101);
  for (int trial = 0; trial < 60; ++trial) {
    auto cfg = any_config(g);
    const auto inc = sample_increments(cfg, cfg.seed);
    auto f = g.nonnegative_field(make_grid(cfg.L, cfg.dx, cfg.dv, cfg.U0));
    const double hi = *std::max_element(f.values().begin(), f.values().end());
    for (std::size_t n = 1; n <= cfg.N; ++n) {
      f = step(f, n, inc, cfg);
      REQUIRE(f.min_value() >= 0.0);
      REQUIRE(*std::max_element(f.values().begin(), f.values().end()) <= hi);
    }
  }
}

TEST_CASE("property: half-width never shrinks and matches the growth log") {
  gen::Gen g(102);
  for (int trial = 0; trial < 40; ++trial) {
    const auto cfg = any_config(g);
    const auto r = run(cfg);
    double U = cfg.U0;
    for (std::size_t n = 1; n < r.diagnostics.size(); ++n) {
      REQUIRE(r.diagnostics[n].U >= r.diagnostics[n - 1].U);
      if (r.diagnostics[n].grew) {
        REQUIRE(r.diagnostics[n].U > r.diagnostics[n - 1].U);
      } else {
        REQUIRE(r.diagnostics[n].U == r.diagnostics[n - 1].U);
      }
    }
    for (const auto& e : r.growth_log) U += e.Xi;
    REQUIRE(r.final_field.grid().U() == doctest::Approx(U).epsilon(1e-13));
    if (cfg.domain == DomainPolicy::Fixed) REQUIRE(r.growth_log.empty());
    REQUIRE(r.min_value >= 0.0);
  }
}

TEST_CASE("property: volume-preserving inverse maps have unit Jacobian") {
  gen::Gen g(103);
  for (int trial = 0; trial < 500; ++trial) {
    const double L = g.uniform(0.5, 4.0);
    const TrigForm Ef{g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)};
    const auto field = FieldEval::analytic(Ef, L);
    std::vector<TrigForm> comps(g.index(1, 3));
    for (auto& c : comps) c = {g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)};
    const SigmaEval sigma(comps, L);
    std::vector<double> db(comps.size());
    for (double& d : db) d = g.normal(0.3);
    const PhasePoint p{g.uniform(0, L), g.uniform(-5, 5)};
    const double tau = g.uniform(0.001, 0.2);
    for (auto kind : {IntegratorKind::SEM, IntegratorKind::LTSM, IntegratorKind::SSM})
      REQUIRE(std::abs(jacobian_det_exact(kind, p, tau, 0.0, field, sigma, db) - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: coarsening preserves path sums") {
  gen::Gen g(104);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t factor = std::size_t{1} << g.index(0, 4);
    const std::size_t K = g.index(1, 3), N = factor * g.index(1, 20);
    const auto fine = sample_path(K, N, 0.01, g.index(0, 1000000));
    const auto coarse = coarsen(fine, factor);
    REQUIRE(coarse.steps() == N / factor);
    REQUIRE(coarse.tau() == doctest::Approx(0.01 * factor));
    for (std::size_t k = 0; k < K; ++k) {
      const auto a = fine.component(k), b = coarse.component(k);
      REQUIRE(std::accumulate(a.begin(), a.end(), 0.0) ==
              doctest::Approx(std::accumulate(b.begin(), b.end(), 0.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: configuration text round-trips") {
  gen::Gen g(105);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = any_config(g);
    c.reconstruction = g.coin() ? Reconstruction::Linear : Reconstruction::Spline;
    c.samples = g.index(1, 1000);
    c.error_window = g.uniform(0.1, 3.0);
    std::istringstream in(config_text(c));
    const auto back = parse_config(in);
    REQUIRE(config_text(back) == config_text(c));
    REQUIRE(back.sigma == c.sigma);
    REQUIRE(back.epsilon0 == c.epsilon0);
    REQUIRE(back.alpha == c.alpha);
  }
}

TEST_CASE("property: snapshot text round-trips") {
  gen::Gen g(106);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = g.signed_field(g.grid());
    std::stringstream s;
    write_snapshot(s, f, g.uniform(0, 10));
    const auto back = read_snapshot(s);
    REQUIRE(back.field.grid().nv() == f.grid().nv());
    REQUIRE(std::ranges::equal(back.field.values(), f.values()));
  }
}
