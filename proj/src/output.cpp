#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ddsl/errors.hpp"
#include "ddsl/harness.hpp"

namespace ddsl {

namespace {

std::string metadata_line(const SimulationConfig& cfg, std::uint64_t seed) {
  std::string m = fmt::format(
      "# cfg_hash={:016x} seed={} case={} integrator={} reconstruction={} domain={} L={:.17g} "
      "T={:.17g} N={} dx={:.17g} dv={:.17g} epsilon0={:.17g}",
      config_hash(cfg), seed, to_string(cfg.field_case), to_string(cfg.integrator),
      to_string(cfg.reconstruction), to_string(cfg.domain), cfg.L, cfg.T, cfg.N, cfg.dx, cfg.dv,
      cfg.epsilon0);
  if (cfg.field_case == FieldCase::I) {
    m += fmt::format(" field={} field_amplitude={:.17g}", to_string(cfg.field_kind),
                     cfg.field_amplitude);
  }
  double trace = 0.0;
  bool constant = true;
  for (const auto& s : cfg.sigma) {
    m += fmt::format(" sigma={}:{:.17g}", to_string(s.kind), s.amplitude);
    constant = constant && s.form().is_constant();
    trace += s.form().c0 * s.form().c0;
  }
  if (constant) m += fmt::format(" sigma_trace={:.17g}", trace);
  return m;
}

void write_record(std::ostream& out, const DiagnosticsRecord& r) {
  fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
             r.t, r.mass, r.l1, r.l2, r.momentum, r.kinetic, r.potential, r.total, r.U,
             r.grew ? 1 : 0);
}

constexpr const char* kTimeseriesHeader = "t,mass,l1,l2,momentum,kinetic,potential,total,U,grew";

}  // namespace

void write_timeseries(std::ostream& out, const RunResult& result, const SimulationConfig& cfg) {
  fmt::print(out, "{}\n{}\n", metadata_line(cfg, result.seed), kTimeseriesHeader);
  for (const auto& r : result.diagnostics) write_record(out, r);
}

void write_timeseries(const std::string& path, const RunResult& result,
                      const SimulationConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write time series: " + path);
  write_timeseries(out, result, cfg);
}

Timeseries read_timeseries(std::istream& in) {
  Timeseries ts;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      ts.metadata = line;
      continue;
    }
    if (!header) {
      if (line != kTimeseriesHeader) throw std::runtime_error("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      v.push_back(std::strtod(cell.c_str(), &end));
      if (end != cell.c_str() + cell.size()) throw std::runtime_error("bad CSV cell: " + cell);
    }
    if (v.size() != 10) throw std::runtime_error("CSV row has wrong column count: " + line);
    DiagnosticsRecord r;
    r.t = v[0];
    r.mass = v[1];
    r.l1 = v[2];
    r.l2 = v[3];
    r.momentum = v[4];
    r.kinetic = v[5];
    r.potential = v[6];
    r.total = v[7];
    r.U = v[8];
    r.grew = v[9] != 0.0;
    ts.rows.push_back(r);
  }
  if (!header) throw std::runtime_error("CSV has no header line");
  return ts;
}

void write_convergence(std::ostream& out, const ConvergenceResult& r,
                       const SimulationConfig& cfg) {
  fmt::print(out, "{} samples={} fitted_order={:.6g}\n", metadata_line(cfg, cfg.seed), r.samples,
             r.fitted_order);
  fmt::print(out, "level,N,tau,dx,dv,error,order,path_checksum\n");
  for (std::size_t l = 0; l < r.levels.size(); ++l) {
    const auto& lv = r.levels[l];
    const double err = l < r.errors.size() ? r.errors[l] : std::nan("");
    const double ord = (l >= 1 && l - 1 < r.orders.size()) ? r.orders[l - 1] : std::nan("");
    fmt::print(out, "{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:016x}\n", l, lv.N, lv.tau,
               lv.dx, lv.dv, err, ord, lv.path_checksum);
  }
}

void write_timing(std::ostream& out, const std::vector<TimingRow>& rows) {
  fmt::print(out, "T,N,adaptive_seconds,nonadaptive_seconds,ratio,adaptive_U,nonadaptive_U\n");
  for (const auto& r : rows) {
    fmt::print(out, "{:.17g},{},{:.6g},{:.6g},{:.6g},{:.17g},{:.17g}\n", r.T, r.N,
               r.adaptive_seconds, r.nonadaptive_seconds, r.ratio, r.adaptive_final_U,
               r.nonadaptive_final_U);
  }
}

void write_monte_carlo(std::ostream& out, const MonteCarloResult& r, const SimulationConfig& cfg) {
  fmt::print(out,
             "{} samples={} momentum_slope={:.17g}+-{:.3g} kinetic_quadratic={:.17g}+-{:.3g} "
             "total_slope={:.17g}+-{:.3g}\n",
             metadata_line(cfg, r.base_seed), r.samples, r.momentum_slope.mean,
             r.momentum_slope.se, r.kinetic_quadratic.mean, r.kinetic_quadratic.se,
             r.total_slope.mean, r.total_slope.se);
  fmt::print(out,
             "t,mass,mass_se,l2,l2_se,momentum,momentum_se,kinetic,kinetic_se,potential,"
             "potential_se,total,total_se,ref_momentum,ref_kinetic,ref_total\n");
  const double nan = std::nan("");
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    const auto& ref = r.reference[n];
    fmt::print(out,
               "{:.17g},{:.17g},{:.3g},{:.17g},{:.3g},{:.17g},{:.3g},{:.17g},{:.3g},{:.17g},"
               "{:.3g},{:.17g},{:.3g},{:.17g},{:.17g},{:.17g}\n",
               r.t[n], r.mass[n].mean, r.mass[n].se, r.l2[n].mean, r.l2[n].se, r.momentum[n].mean,
               r.momentum[n].se, r.kinetic[n].mean, r.kinetic[n].se, r.potential[n].mean,
               r.potential[n].se, r.total[n].mean, r.total[n].se, ref.momentum.value_or(nan),
               ref.kinetic.value_or(nan), ref.total.value_or(nan));
  }
}

}  // namespace ddsl
