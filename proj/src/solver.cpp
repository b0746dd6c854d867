#include "ddsl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ddsl/characteristics.hpp"
#include "ddsl/errors.hpp"
#include "ddsl/field.hpp"
#include "ddsl/interpolation.hpp"

namespace ddsl {

double initial_density_landau(double x, double v, double alpha, double L) {
  const double w = 2.0 * std::numbers::pi / L;
  return std::exp(-0.5 * v * v) * (1.0 + alpha * std::cos(w * x)) /
         std::sqrt(2.0 * std::numbers::pi);
}

double initial_density_two_stream(double x, double v, double alpha, double L) {
  return v * v * initial_density_landau(x, v, alpha, L);
}

double choose_U0(const std::function<double(double, double)>& f0, double L, double epsilon0,
                 double dv, std::size_t x_samples) {
  if (!(epsilon0 > 0.0) || !(dv > 0.0) || !(L > 0.0) || x_samples == 0) {
    throw ConfigError("choose_U0: need epsilon0 > 0, dv > 0, L > 0");
  }
  const double dxp = L / static_cast<double>(x_samples);
  auto below = [&](double v) {
    for (std::size_t i = 0; i < x_samples; ++i) {
      const double x = static_cast<double>(i) * dxp;
      if (!(std::abs(f0(x, v)) < epsilon0) || !(std::abs(f0(x, -v)) < epsilon0)) return false;
    }
    return true;
  };
  constexpr std::size_t cap = 10000;
  for (std::size_t m = 1; m <= cap; ++m) {
    const double U = static_cast<double>(m) * dv;
    bool ok = true;
    for (std::size_t q = 0; q <= 4 * m && ok; ++q) {
      ok = below(U + 0.25 * dv * static_cast<double>(q));
    }
    if (ok) return U;
  }
  throw ConfigError(fmt::format("choose_U0: density does not fall below {} within {} velocity cells",
                                epsilon0, cap));
}

DensityField initial_field(const SimulationConfig& cfg) {
  const auto f0 = cfg.initial_density();
  const double U0 = cfg.U0 > 0.0 ? cfg.U0 : choose_U0(f0, cfg.L, cfg.epsilon0, cfg.dv);
  DensityField field(make_grid(cfg.L, cfg.dx, cfg.dv, U0));
  const PhaseGrid& g = field.grid();
  for (std::size_t j = 0; j < g.nx(); ++j) {
    const double x = g.x(j);
    for (std::size_t k = 0; k < g.nv(); ++k) field(j, k) = f0(x, g.v(k));
  }
  return field;
}

double truncation_level(double tau) { return std::sqrt(2.0 * tau * std::abs(std::log(tau))); }

BrownianIncrements sample_increments(const SimulationConfig& cfg, std::uint64_t seed) {
  if (cfg.K() == 0 || cfg.N == 0) {
    return BrownianIncrements(cfg.K(), 0, cfg.tau(), seed, {});
  }
  return sample_path(cfg.K(), cfg.N, cfg.tau(), seed);
}

namespace {

// sin/cos of w * shift * v_k for every velocity node, so that the trigonometric
// factors at x_j - shift * v_k follow from the angle-difference identities.
struct AngleTable {
  std::vector<double> s, c;
  AngleTable(const PhaseGrid& g, double w_shift) : s(g.nv()), c(g.nv()) {
    for (std::size_t k = 0; k < g.nv(); ++k) {
      const double a = w_shift * g.v(k);
      s[k] = std::sin(a);
      c[k] = std::cos(a);
    }
  }
};

// Departure points of all nodes of `out`'s grid, row by row, then
// reconstruction. The maps are those of InverseKernel::step; the trig factors
// come from row and column tables instead of per-node evaluation.
template <class Force, class Interp>
void backtrace(const Force& force, bool analytic, const TrigForm& Eform, const TrigForm& kick,
               double tau, IntegratorKind kind, const Interp& interp, DensityField& out) {
  const PhaseGrid& g = out.grid();
  const std::size_t nv = g.nv();
  const double L = g.L();
  const double w = 2.0 * std::numbers::pi / L;
  const double half = 0.5 * tau;
  const AngleTable tab(g, kind == IntegratorKind::SSM ? w * half : w * tau);
  double* dst = out.values().data();
  auto wrap = [L](double X) { return X - L * detail::fast_floor(X / L); };

  for (std::size_t j = 0; j < g.nx(); ++j) {
    const double x = g.x(j);
    double* row = dst + j * nv;
    switch (kind) {
      case IntegratorKind::SEM:
      case IntegratorKind::SSM: {
        const double sx = std::sin(w * x), cx = std::cos(w * x);
        const double shift = kind == IntegratorKind::SEM ? tau : half;
        for (std::size_t k = 0; k < nv; ++k) {
          const double v = g.v(k);
          const double s = sx * tab.c[k] - cx * tab.s[k];
          const double c = cx * tab.c[k] + sx * tab.s[k];
          const double xe = x - shift * v;  // evaluation point of E and sigma
          const double E = analytic ? Eform(s, c) : force(xe);
          const double V = v - tau * E - kick(s, c);
          const double X = kind == IntegratorKind::SEM ? xe : x - half * (v + V);
          row[k] = interp(wrap(X), V);
        }
        break;
      }
      case IntegratorKind::LTSM: {
        const double E = force(x);
        const double x1 = x + tau * tau * E;
        const double s1 = std::sin(w * x1), c1 = std::cos(w * x1);
        for (std::size_t k = 0; k < nv; ++k) {
          const double v = g.v(k);
          const double s = s1 * tab.c[k] - c1 * tab.s[k];
          const double c = c1 * tab.c[k] + s1 * tab.s[k];
          const double X = x - tau * v + (tau * tau) * E;
          const double V = v - tau * E - kick(s, c);
          row[k] = interp(wrap(X), V);
        }
        break;
      }
      case IntegratorKind::EM_BASELINE: {
        const double sx = std::sin(w * x), cx = std::cos(w * x);
        const double E = force(x);
        const double kx = kick(sx, cx);
        for (std::size_t k = 0; k < nv; ++k) {
          const double v = g.v(k);
          row[k] = interp(wrap(x - tau * v), v - tau * E - kx);
        }
        break;
      }
    }
  }
}

template <class Interp>
void backtrace(const FieldEval& E, const TrigForm& kick, double tau, IntegratorKind kind,
               const Interp& interp, DensityField& out) {
  const double L = out.grid().L();
  if (E.is_analytic()) {
    backtrace(AnalyticForce{E.form(), L}, true, E.form(), kick, tau, kind, interp, out);
  } else {
    const auto nodes = E.nodes();
    const NodalForce force{nodes, L / static_cast<double>(nodes.size()), L};
    backtrace(force, false, TrigForm{}, kick, tau, kind, interp, out);
  }
}

std::size_t aligned_cells(double Xi_tilde, double dv) {
  return static_cast<std::size_t>(std::ceil(Xi_tilde / dv));
}

}  // namespace

DensityField step(const DensityField& state, std::size_t n, const BrownianIncrements& inc,
                  const SimulationConfig& cfg, StepInfo* info) {
  const PhaseGrid& g = state.grid();
  const double tau = cfg.tau();
  const double L = g.L();

  // (1) field at the left endpoint
  FieldEval E;
  if (cfg.field_case == FieldCase::II) {
    E = field_eval(solve_field(density_rho(state), L), L);
  } else {
    E = FieldEval::analytic(cfg.case_one().form(), L);
  }
  const SigmaEval sigma = make_sigma(cfg.sigma, L);
  const std::vector<double> dbeta =
      inc.components() == 0 ? std::vector<double>{} : inc.step(n - 1);
  const TrigForm kick = sigma.combined(dbeta);

  // (2) domain update
  StepInfo si;
  const auto sigmax = sigma.bounds();
  if (cfg.domain == DomainPolicy::NonAdaptive) {
    double s = 0.0;
    for (double b : sigmax) s += b;
    si.Xi_tilde = tau * E.bound() + truncation_level(tau) * s;
    si.xi_cells = aligned_cells(si.Xi_tilde, g.dv());
    si.grew = si.xi_cells > 0;
  } else {
    si.Xi_tilde = displacement_bound(tau, E.bound(), sigmax, dbeta);
    si.xi_cells = aligned_cells(si.Xi_tilde, g.dv());
    if (cfg.domain == DomainPolicy::Adaptive) {
      si.grew = update_halfwidth(state, si.xi_cells, cfg.epsilon0).grew;
    }
  }
  DensityField next(si.grew ? g.widened(si.xi_cells) : g);

  // (3) back-trace; the interpolants return 0 outside the old domain
  if (cfg.reconstruction == Reconstruction::Spline) {
    backtrace(E, kick, tau, cfg.integrator, SplineInterpolant(state), next);
  } else {
    backtrace(E, kick, tau, cfg.integrator, LinearInterpolant(state), next);
  }
  if (info) *info = si;
  return next;
}

namespace {

void check_increments(const SimulationConfig& cfg, const BrownianIncrements& inc) {
  if (inc.components() != cfg.K()) {
    throw ConfigError(fmt::format("increments have {} components, sigma has {}",
                                  inc.components(), cfg.K()));
  }
  if (inc.components() > 0 && cfg.N > 0 && inc.steps() != cfg.N) {
    throw ConfigError(fmt::format("increments have {} steps, config has N = {}", inc.steps(),
                                  cfg.N));
  }
}

// Minimum value, or NaN if any value is not finite.
double checked_min(const DensityField& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f.values()) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    m = std::min(m, v);
  }
  return m;
}

void check_record(const DiagnosticsRecord& r, std::size_t n) {
  for (double q : {r.mass, r.l1, r.l2, r.momentum, r.kinetic}) {
    if (!std::isfinite(q)) throw NumericalError(n, "non-finite diagnostics");
  }
}

}  // namespace

RunResult run(const SimulationConfig& cfg, const BrownianIncrements& inc, const RunOptions& opts) {
  cfg.validate();
  check_increments(cfg, inc);

  const BrownianIncrements* path = &inc;
  BrownianIncrements truncated;
  if (cfg.domain == DomainPolicy::NonAdaptive && inc.components() > 0) {
    truncated = truncate(inc, truncation_level(cfg.tau()));
    path = &truncated;
  }

  RunResult out;
  out.seed = inc.seed();
  const auto start = std::chrono::steady_clock::now();

  DensityField field = initial_field(cfg);
  out.min_value = checked_min(field);
  if (std::isnan(out.min_value)) throw NumericalError(0, "initial density is not finite");
  if (opts.diagnostics) {
    out.diagnostics.reserve(cfg.N + 1);
    out.diagnostics.push_back(compute_diagnostics(field, 0.0, cfg));
    check_record(out.diagnostics.back(), 0);
  }
  auto snapshot_due = [&](std::size_t n) {
    return opts.keep_snapshots && cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0;
  };
  if (snapshot_due(0)) out.snapshots.push_back({field, 0.0});

  for (std::size_t n = 1; n <= cfg.N; ++n) {
    StepInfo info;
    field = step(field, n, *path, cfg, &info);
    const double m = checked_min(field);
    if (std::isnan(m)) throw NumericalError(n, "non-finite nodal value");
    out.min_value = std::min(out.min_value, m);
    if (info.grew) out.growth_log.push_back({n, static_cast<double>(info.xi_cells) * cfg.dv});
    const double t = static_cast<double>(n) * cfg.tau();
    if (opts.diagnostics) {
      auto rec = compute_diagnostics(field, t, cfg);
      rec.grew = info.grew;
      check_record(rec, n);
      out.diagnostics.push_back(rec);
    }
    if (snapshot_due(n)) out.snapshots.push_back({field, t});
  }

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.final_field = std::move(field);
  return out;
}

RunResult run(const SimulationConfig& cfg, const RunOptions& opts) {
  return run(cfg, sample_increments(cfg, cfg.seed), opts);
}

RunResult run_nonadaptive(const SimulationConfig& cfg, const BrownianIncrements& inc,
                          const RunOptions& opts) {
  SimulationConfig c = cfg;
  c.domain = DomainPolicy::NonAdaptive;
  return run(c, inc, opts);
}

}  // namespace ddsl
