#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out = ".";
  unsigned threads = 0;  // 0: take the config value
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "INI configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--set", c.overrides, "Override a key: section.key=value")->take_all();
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--threads", c.threads, "Worker threads over samples");
}

ddsl::SimulationConfig load(const Common& c) {
  auto cfg = ddsl::load_config(c.config, c.overrides);
  if (c.threads > 0) cfg.threads = c.threads;
  fs::create_directories(c.out);
  return cfg;
}

std::ofstream open_out(const Common& c, const std::string& name) {
  const auto path = fs::path(c.out) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

int cmd_run(const Common& c) {
  const auto cfg = load(c);
  const auto res = ddsl::run(cfg, ddsl::RunOptions{true, cfg.snapshot_every > 0});
  {
    auto f = open_out(c, "timeseries.csv");
    ddsl::write_timeseries(f, res, cfg);
  }
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    const auto path = fs::path(c.out) / fmt::format("snapshot_{:04d}.txt", i);
    ddsl::write_snapshot(path.string(), res.snapshots[i].field, res.snapshots[i].t);
  }
  {
    auto f = open_out(c, "config.ini");
    ddsl::save_config(f, cfg);
  }
  const auto& last = res.diagnostics.back();
  fmt::print("steps={} seconds={:.3f} U={:.6g} growths={} mass={:.10g} min={:.3g}\n", cfg.N,
             res.wall_seconds, last.U, res.growth_log.size(), last.mass, res.min_value);
  return 0;
}

int cmd_converge(const Common& c) {
  const auto cfg = load(c);
  const auto res = ddsl::run_convergence_study(cfg, cfg.levels, cfg.samples, cfg.threads);
  auto f = open_out(c, "convergence.csv");
  ddsl::write_convergence(f, res, cfg);
  ddsl::write_convergence(std::cout, res, cfg);
  return 0;
}

int cmd_timing(const Common& c, const std::vector<std::size_t>& steps) {
  const auto cfg = load(c);
  std::vector<ddsl::SimulationConfig> cfgs;
  if (steps.empty()) {
    cfgs.push_back(cfg);
  } else {
    for (std::size_t n : steps) {
      auto v = cfg;
      v.N = n;
      cfgs.push_back(v);
    }
  }
  const auto rows = ddsl::run_timing_study(cfgs, cfg.repetitions);
  auto f = open_out(c, "timing.csv");
  ddsl::write_timing(f, rows);
  ddsl::write_timing(std::cout, rows);
  return 0;
}

int cmd_mc(const Common& c) {
  const auto cfg = load(c);
  const auto res = ddsl::run_monte_carlo(cfg, cfg.samples, cfg.threads);
  auto f = open_out(c, "monte_carlo.csv");
  ddsl::write_monte_carlo(f, res, cfg);
  fmt::print("samples={} momentum_slope={:.6g}+-{:.2g} kinetic_quadratic={:.6g}+-{:.2g} "
             "total_slope={:.6g}+-{:.2g} seconds={:.1f}\n",
             res.samples, res.momentum_slope.mean, res.momentum_slope.se,
             res.kinetic_quadratic.mean, res.kinetic_quadratic.se, res.total_slope.mean,
             res.total_slope.se, res.wall_seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-domain semi-Lagrangian solver for stochastic Vlasov equations"};
  app.require_subcommand(1);

  Common run_o, conv_o, time_o, mc_o;
  std::vector<std::size_t> timing_steps;
  auto* run = app.add_subcommand("run", "Run one simulation and write diagnostics");
  add_common(run, run_o);
  auto* conv = app.add_subcommand("converge", "Nested-resolution convergence study");
  add_common(conv, conv_o);
  auto* timing = app.add_subcommand("timing", "Adaptive vs non-adaptive wall-clock comparison");
  add_common(timing, time_o);
  timing->add_option("--steps", timing_steps, "Step counts to compare (default: simulation.N)")
      ->delimiter(',');
  auto* mc = app.add_subcommand("mc", "Monte Carlo mean diagnostics");
  add_common(mc, mc_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_o);
    if (*conv) return cmd_converge(conv_o);
    if (*timing) return cmd_timing(time_o, timing_steps);
    if (*mc) return cmd_mc(mc_o);
  } catch (const ddsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ddsl::NumericalError& e) {
    std::cerr << "numerical abort at " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
