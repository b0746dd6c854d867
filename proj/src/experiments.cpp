#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"
#include "ddsl/noise.hpp"

namespace ddsl {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Value of `f` at the node (x = j dx, v = m dv) of a grid `scale` times coarser
// in both directions; zero outside the stored velocity range.
double coarse_node_value(const DensityField& f, std::size_t j, long long m, std::size_t scale) {
  const auto& g = f.grid();
  const long long kf = m * static_cast<long long>(scale) + static_cast<long long>(g.half_count());
  if (kf < 0 || kf >= static_cast<long long>(g.nv())) return 0.0;
  return f(j * scale, static_cast<std::size_t>(kf));
}

}  // namespace

ConvergenceResult run_convergence_study(const SimulationConfig& base, std::size_t levels,
                                        std::size_t samples, unsigned threads) {
  base.validate();
  if (levels < 2) throw ConfigError("convergence study needs at least 2 levels");
  if (samples < 1) throw ConfigError("convergence study needs at least 1 sample");
  if (!(base.U0 > 0.0)) throw ConfigError("convergence study needs an explicit U0");
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t top = std::size_t{1} << (levels - 1);
  {
    const double nx = base.L / (base.dx / static_cast<double>(top));
    const double nv = 2.0 * base.U0 / (base.dv / static_cast<double>(top)) + 1.0;
    if (nx * nv > base.node_budget) {
      throw ConfigError(fmt::format("finest grid has {:.3g} nodes, above the node budget {:.3g}",
                                    nx * nv, base.node_budget));
    }
  }

  ConvergenceResult res;
  res.samples = samples;
  std::vector<SimulationConfig> cfgs;
  for (std::size_t l = 0; l < levels; ++l) {
    const double s = static_cast<double>(std::size_t{1} << l);
    SimulationConfig c = base;
    c.N = base.N << l;
    c.dx = base.dx / s;
    c.dv = base.dv / s;
    c.validate();
    cfgs.push_back(c);
    res.levels.push_back({c.N, c.tau(), c.dx, c.dv, 0});
  }

  // Window nodes of level l: all position nodes, |m| dv_l <= error_window.
  std::vector<std::size_t> nx(levels), mw(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    nx[l] = aligned_ratio(cfgs[l].L, cfgs[l].dx, "L/dx");
    mw[l] = static_cast<std::size_t>(std::floor(base.error_window / cfgs[l].dv + 1e-9));
  }

  // diffs[sample][pair] = squared nodal differences on the level-`pair` window.
  std::vector<std::vector<std::vector<double>>> diffs(samples);
  std::vector<std::uint64_t> checksums(levels);
  std::vector<double> mins(samples, 0.0);

  parallel_for(samples, threads, [&](std::size_t i) {
    const std::uint64_t seed = base.seed + i;
    const BrownianIncrements finest =
        base.K() == 0 ? BrownianIncrements(0, cfgs.back().N, cfgs.back().tau(), seed, {})
                      : sample_path(base.K(), cfgs.back().N, cfgs.back().tau(), seed);
    std::vector<DensityField> finals;
    finals.reserve(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      const BrownianIncrements inc =
          base.K() == 0 ? BrownianIncrements(0, cfgs[l].N, cfgs[l].tau(), seed, {})
                        : coarsen(finest, std::size_t{1} << (levels - 1 - l));
      if (i == 0) checksums[l] = inc.checksum();
      auto r = run(cfgs[l], inc, RunOptions{false, false});
      mins[i] = l == 0 ? r.min_value : std::min(mins[i], r.min_value);
      finals.push_back(std::move(r.final_field));
    }
    auto& out = diffs[i];
    out.resize(levels - 1);
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      const long long w = static_cast<long long>(mw[l]);
      auto& d = out[l];
      d.reserve(nx[l] * static_cast<std::size_t>(2 * w + 1));
      for (std::size_t j = 0; j < nx[l]; ++j) {
        for (long long m = -w; m <= w; ++m) {
          const double a = coarse_node_value(finals[l], j, m, 1);
          const double b = coarse_node_value(finals[l + 1], j, m, 2);
          d.push_back((a - b) * (a - b));
        }
      }
    }
  });

  for (std::size_t l = 0; l < levels; ++l) res.levels[l].path_checksum = checksums[l];
  res.min_value = *std::min_element(mins.begin(), mins.end());
  for (std::size_t l = 0; l + 1 < levels; ++l) {
    const std::size_t n = diffs[0][l].size();
    double sup = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < samples; ++i) s += diffs[i][l][q];
      sup = std::max(sup, std::sqrt(s / static_cast<double>(samples)));
    }
    res.errors.push_back(sup);
  }
  for (std::size_t l = 0; l + 1 < res.errors.size(); ++l) {
    res.orders.push_back(std::log2(res.errors[l] / res.errors[l + 1]));
  }
  if (res.errors.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t l = 0; l < res.errors.size(); ++l) {
      x.push_back(static_cast<double>(l));
      y.push_back(-std::log2(res.errors[l]));
    }
    res.fitted_order = fit_linear(x, y).slope;
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

std::vector<TimingRow> run_timing_study(const std::vector<SimulationConfig>& cfgs,
                                        std::size_t repetitions) {
  if (repetitions == 0) throw ConfigError("timing study needs at least 1 repetition");
  std::vector<TimingRow> rows;
  for (const auto& cfg : cfgs) {
    const BrownianIncrements inc = sample_increments(cfg, cfg.seed);
    SimulationConfig adaptive = cfg;
    adaptive.domain = DomainPolicy::Adaptive;
    std::vector<double> ta, tn;
    TimingRow row;
    row.T = cfg.T;
    row.N = cfg.N;
    const RunOptions bare{false, false};
    row.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < repetitions; ++r) {
      const auto a = run(adaptive, inc, bare);
      const auto b = run_nonadaptive(cfg, inc, bare);
      row.min_value = std::min({row.min_value, a.min_value, b.min_value});
      ta.push_back(a.wall_seconds);
      tn.push_back(b.wall_seconds);
      row.adaptive_final_U = a.final_field.grid().U();
      row.nonadaptive_final_U = b.final_field.grid().U();
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    row.adaptive_seconds = median(ta);
    row.nonadaptive_seconds = median(tn);
    row.ratio = row.nonadaptive_seconds / row.adaptive_seconds;
    rows.push_back(row);
  }
  return rows;
}

namespace {

SampleStat summarize(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

MonteCarloResult run_monte_carlo(const SimulationConfig& cfg, std::size_t samples,
                                 unsigned threads) {
  cfg.validate();
  if (samples < 2) throw ConfigError("Monte Carlo needs at least 2 samples");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::vector<DiagnosticsRecord>> diag(samples);
  std::vector<double> mins(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    auto r = run(cfg, sample_increments(cfg, cfg.seed + i));
    mins[i] = r.min_value;
    diag[i] = std::move(r.diagnostics);
  });

  MonteCarloResult res;
  res.samples = samples;
  res.base_seed = cfg.seed;
  res.initial = diag[0].front();
  res.min_value = *std::min_element(mins.begin(), mins.end());
  const std::size_t nt = diag[0].size();
  std::vector<double> col(samples);
  auto column = [&](std::size_t n, double DiagnosticsRecord::*field) {
    for (std::size_t i = 0; i < samples; ++i) col[i] = diag[i][n].*field;
    return summarize(col);
  };
  for (std::size_t n = 0; n < nt; ++n) {
    const double t = diag[0][n].t;
    res.t.push_back(t);
    res.mass.push_back(column(n, &DiagnosticsRecord::mass));
    res.l2.push_back(column(n, &DiagnosticsRecord::l2));
    res.momentum.push_back(column(n, &DiagnosticsRecord::momentum));
    res.kinetic.push_back(column(n, &DiagnosticsRecord::kinetic));
    res.potential.push_back(column(n, &DiagnosticsRecord::potential));
    res.total.push_back(column(n, &DiagnosticsRecord::total));
    res.reference.push_back(reference_laws(cfg, res.initial, t));
  }

  std::vector<double> ps(samples), kq(samples), ts(samples), y(nt);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t n = 0; n < nt; ++n) y[n] = diag[i][n].momentum;
    ps[i] = fit_linear(res.t, y).slope;
    if (nt >= 3) {
      for (std::size_t n = 0; n < nt; ++n) y[n] = diag[i][n].kinetic;
      kq[i] = fit_quadratic(res.t, y).c2;
    }
    for (std::size_t n = 0; n < nt; ++n) y[n] = diag[i][n].total;
    ts[i] = res.initial.has_potential() ? fit_linear(res.t, y).slope
                                        : std::numeric_limits<double>::quiet_NaN();
  }
  res.momentum_slope = summarize(ps);
  res.kinetic_quadratic = summarize(kq);
  res.total_slope = summarize(ts);
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace ddsl
