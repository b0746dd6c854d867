#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddsl/config.hpp"
#include "ddsl/diagnostics.hpp"
#include "ddsl/solver.hpp"

namespace ddsl {

// ---- configuration files -------------------------------------------------
//
// INI text with sections [simulation], [field], [sigma], [initial],
// [experiment]. Unknown sections or keys are rejected; all missing required
// keys are reported together. Overrides use "section.key=value".

SimulationConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
SimulationConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});
void save_config(std::ostream& out, const SimulationConfig& cfg);
void save_config(const std::string& path, const SimulationConfig& cfg);
std::string config_text(const SimulationConfig& cfg);
// FNV-1a of the serialized configuration.
std::uint64_t config_hash(const SimulationConfig& cfg);

// ---- output files --------------------------------------------------------

// CSV: one "# ..." metadata line (config hash, seed, reference-law
// parameters), the header t,mass,l1,l2,momentum,kinetic,potential,total,U,grew,
// then one row per time level. Unavailable values are written as nan.
void write_timeseries(std::ostream& out, const RunResult& result, const SimulationConfig& cfg);
void write_timeseries(const std::string& path, const RunResult& result,
                      const SimulationConfig& cfg);

struct Timeseries {
  std::string metadata;
  std::vector<DiagnosticsRecord> rows;
};
Timeseries read_timeseries(std::istream& in);

// ---- worker pool ---------------------------------------------------------

// Calls fn(i) for i in [0, count) on at most `threads` workers. The first
// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// ---- experiments ---------------------------------------------------------

struct ConvergenceLevel {
  std::size_t N = 0;
  double tau = 0.0;
  double dx = 0.0;
  double dv = 0.0;
  std::uint64_t path_checksum = 0;  // of sample 0's increments at this level
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  // errors[l]: sup over level-l nodes in the window of the RMS (over samples)
  // difference between levels l and l+1 at the final time.
  std::vector<double> errors;
  // orders[l] = log2(errors[l] / errors[l+1]).
  std::vector<double> orders;
  // Least-squares slope of -log2(error) against level.
  double fitted_order = 0.0;
  // Smallest nodal value over every run of the study.
  double min_value = 0.0;
  std::size_t samples = 0;
  double wall_seconds = 0.0;
};

// cfg defines the coarsest level; each further level halves tau, dx and dv.
ConvergenceResult run_convergence_study(const SimulationConfig& cfg, std::size_t levels,
                                        std::size_t samples, unsigned threads = 1);

struct TimingRow {
  double T = 0.0;
  std::size_t N = 0;
  double adaptive_seconds = 0.0;
  double nonadaptive_seconds = 0.0;
  double ratio = 0.0;
  double adaptive_final_U = 0.0;
  double nonadaptive_final_U = 0.0;
  double min_value = 0.0;  // over both variants and all repetitions
};

// One path per configuration (cfg.seed), shared by both variants; median of
// `repetitions` timings. Diagnostics are switched off while timing.
std::vector<TimingRow> run_timing_study(const std::vector<SimulationConfig>& cfgs,
                                        std::size_t repetitions = 3);

struct SampleStat {
  double mean = 0.0;
  double se = 0.0;
};

struct MonteCarloResult {
  std::vector<double> t;
  std::vector<SampleStat> mass, l2, momentum, kinetic, potential, total;
  std::vector<ReferenceLaws> reference;
  DiagnosticsRecord initial;
  // Per-sample least-squares fits, summarized across samples.
  SampleStat momentum_slope;
  SampleStat kinetic_quadratic;
  SampleStat total_slope;
  double min_value = 0.0;
  std::size_t samples = 0;
  std::uint64_t base_seed = 0;
  double wall_seconds = 0.0;
};

// Sample i uses seed cfg.seed + i. Requires samples >= 2.
MonteCarloResult run_monte_carlo(const SimulationConfig& cfg, std::size_t samples,
                                 unsigned threads = 1);

void write_convergence(std::ostream& out, const ConvergenceResult& r, const SimulationConfig& cfg);
void write_timing(std::ostream& out, const std::vector<TimingRow>& rows);
void write_monte_carlo(std::ostream& out, const MonteCarloResult& r, const SimulationConfig& cfg);

}  // namespace ddsl
