#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ddsl/config.hpp"
#include "ddsl/diagnostics.hpp"
#include "ddsl/noise.hpp"
#include "ddsl/phase_grid.hpp"

namespace ddsl {

double initial_density_landau(double x, double v, double alpha, double L);
double initial_density_two_stream(double x, double v, double alpha, double L);

// Smallest dv-multiple U0 with |f0(x, v)| < epsilon0 for all probed |v| >= U0.
// Probes: `x_samples` positions and a dv/4 velocity lattice on [U0, 2 U0], both
// signs. Throws ConfigError if no U0 <= 1e4 dv qualifies.
double choose_U0(const std::function<double(double, double)>& f0, double L, double epsilon0,
                 double dv, std::size_t x_samples = 64);

// Pointwise nodal sampling of cfg's initial density on the U0 grid.
DensityField initial_field(const SimulationConfig& cfg);

struct StepInfo {
  std::size_t xi_cells = 0;  // Xi_n / dv
  double Xi_tilde = 0.0;
  bool grew = false;
};

// One step of the dynamic-domain scheme: field from `state` (Case II), domain
// update according to cfg.domain, then back-tracing of every node of the
// (possibly grown) grid. `n` is 1-based and uses increment n-1.
DensityField step(const DensityField& state, std::size_t n, const BrownianIncrements& inc,
                  const SimulationConfig& cfg, StepInfo* info = nullptr);

struct RunResult {
  std::vector<DiagnosticsRecord> diagnostics;  // N + 1 entries
  DensityField final_field;
  std::vector<GrowthEvent> growth_log;
  std::vector<Snapshot> snapshots;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  // Smallest nodal value seen over all time levels, including t = 0.
  double min_value = 0.0;
};

struct RunOptions {
  bool diagnostics = true;
  bool keep_snapshots = false;
};

// Runs cfg with the given increments (N steps, K components). The policy in
// cfg.domain selects adaptive, fixed or non-adaptive domain handling.
RunResult run(const SimulationConfig& cfg, const BrownianIncrements& inc,
              const RunOptions& opts = {});
// Convenience: samples the path from cfg.seed.
RunResult run(const SimulationConfig& cfg, const RunOptions& opts = {});

// run() with the non-adaptive baseline policy.
RunResult run_nonadaptive(const SimulationConfig& cfg, const BrownianIncrements& inc,
                          const RunOptions& opts = {});

// Truncation level of the non-adaptive baseline: sqrt(2 tau |ln tau|).
double truncation_level(double tau);

BrownianIncrements sample_increments(const SimulationConfig& cfg, std::uint64_t seed);

}  // namespace ddsl
