#include "ddsl/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ddsl {

PhaseGrid::PhaseGrid(double L, double dx, double dv, std::size_t nx, std::size_t half_count)
    : L_(L), dx_(dx), dv_(dv), nx_(nx), half_(half_count) {
  if (!(L > 0.0) || !(dx > 0.0) || !(dv > 0.0)) {
    throw std::invalid_argument("PhaseGrid: L, dx, dv must be positive");
  }
  if (nx == 0 || half_count == 0) {
    throw std::invalid_argument("PhaseGrid: node counts must be positive");
  }
}

PhaseGrid PhaseGrid::widened(std::size_t extra) const {
  return PhaseGrid(L_, dx_, dv_, nx_, half_ + extra);
}

bool PhaseGrid::same_mesh(const PhaseGrid& other) const {
  return L_ == other.L_ && dx_ == other.dx_ && dv_ == other.dv_ && nx_ == other.nx_;
}

std::size_t aligned_ratio(double num, double den, const std::string& what) {
  if (!(den > 0.0) || !std::isfinite(num) || num < 0.0) {
    throw std::invalid_argument(fmt::format("{} is not a nonnegative finite ratio", what));
  }
  const double r = num / den;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) {
    throw std::invalid_argument(
        fmt::format("{} = {:.17g} is not an integer (grid alignment)", what, r));
  }
  return static_cast<std::size_t>(n);
}

PhaseGrid make_grid(double L, double dx, double dv, double U) {
  if (!(L > 0.0) || !(dx > 0.0) || !(dv > 0.0) || !(U > 0.0)) {
    throw std::invalid_argument("make_grid: L, dx, dv, U must be positive");
  }
  const std::size_t nx = aligned_ratio(L, dx, "L/dx");
  const std::size_t half = aligned_ratio(U, dv, "U/dv");
  if (nx == 0) throw std::invalid_argument("make_grid: L/dx must be at least 1");
  if (half == 0) throw std::invalid_argument("make_grid: U/dv must be at least 1");
  return PhaseGrid(L, dx, dv, nx, half);
}

DensityField::DensityField(PhaseGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

DensityField::DensityField(PhaseGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument(fmt::format("DensityField: expected {} values, got {}",
                                            grid_.size(), values_.size()));
  }
}

double DensityField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

bool DensityField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double f) { return std::isfinite(f); });
}

DensityField grow_grid(const DensityField& field, std::size_t extra) {
  if (extra == 0) return field;
  const PhaseGrid& old = field.grid();
  DensityField grown(old.widened(extra));
  for (std::size_t j = 0; j < old.nx(); ++j) {
    auto src = field.row(j);
    std::copy(src.begin(), src.end(), grown.values().begin() + j * grown.grid().nv() + extra);
  }
  return grown;
}

DensityField grow_grid(const DensityField& field, double Xi) {
  return grow_grid(field, aligned_ratio(Xi, field.grid().dv(), "Xi/dv"));
}

HalfwidthUpdate update_halfwidth(const DensityField& field, std::size_t xi_cells,
                                 double epsilon0) {
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("update_halfwidth: epsilon0 must be > 0");
  const PhaseGrid& g = field.grid();
  const double dv = g.dv();
  if (xi_cells == 0) return {g.U(), false};
  const std::size_t half = g.half_count();
  const double U_grown = static_cast<double>(half + xi_cells) * dv;
  if (xi_cells >= half) return {U_grown, true};

  // Band indices: |k - half| >= half - xi_cells, i.e. k <= xi_cells or k >= nv-1-xi_cells.
  const std::size_t nv = g.nv();
  for (std::size_t j = 0; j < g.nx(); ++j) {
    auto row = field.row(j);
    for (std::size_t k = 0; k <= xi_cells; ++k) {
      if (std::abs(row[k]) > epsilon0 || std::abs(row[nv - 1 - k]) > epsilon0) {
        return {U_grown, true};
      }
    }
  }
  return {g.U(), false};
}

HalfwidthUpdate update_halfwidth(const DensityField& field, double Xi, double epsilon0) {
  return update_halfwidth(field, aligned_ratio(Xi, field.grid().dv(), "Xi/dv"), epsilon0);
}

void write_snapshot(std::ostream& out, const DensityField& field, double t) {
  const PhaseGrid& g = field.grid();
  fmt::print(out, "# vlasov-snapshot v1 L={:.17g} dx={:.17g} dv={:.17g} U={:.17g} t={:.17g}\n",
             g.L(), g.dx(), g.dv(), g.U(), t);
  fmt::memory_buffer buf;
  for (std::size_t j = 0; j < g.nx(); ++j) {
    for (std::size_t k = 0; k < g.nv(); ++k) {
      fmt::format_to(std::back_inserter(buf), "{} {} {:.17g}\n", j, k, field(j, k));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  }
}

void write_snapshot(const std::string& path, const DensityField& field, double t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  write_snapshot(out, field, t);
}

namespace {

double header_value(const std::string& header, const std::string& key) {
  const std::string tag = " " + key + "=";
  const auto pos = header.find(tag);
  if (pos == std::string::npos) {
    throw std::runtime_error("snapshot header missing " + key);
  }
  std::istringstream is(header.substr(pos + tag.size()));
  double value = 0.0;
  if (!(is >> value)) throw std::runtime_error("snapshot header: bad value for " + key);
  return value;
}

}  // namespace

Snapshot read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# vlasov-snapshot v1", 0) != 0) {
    throw std::runtime_error("snapshot: missing '# vlasov-snapshot v1' header");
  }
  const double L = header_value(header, "L");
  const double dx = header_value(header, "dx");
  const double dv = header_value(header, "dv");
  const double U = header_value(header, "U");
  const double t = header_value(header, "t");
  DensityField field(make_grid(L, dx, dv, U));
  const PhaseGrid& g = field.grid();
  for (std::size_t j = 0; j < g.nx(); ++j) {
    for (std::size_t k = 0; k < g.nv(); ++k) {
      std::size_t jj = 0;
      std::size_t kk = 0;
      std::string token;
      if (!(in >> jj >> kk >> token)) {
        throw std::runtime_error(fmt::format("snapshot: truncated at node ({}, {})", j, k));
      }
      // strtod, unlike operator>>, accepts subnormal values.
      char* end = nullptr;
      const double value = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        throw std::runtime_error(fmt::format("snapshot: bad value '{}' at node ({}, {})", token, j, k));
      }
      if (jj != j || kk != k) {
        throw std::runtime_error(
            fmt::format("snapshot: expected node ({}, {}), found ({}, {})", j, k, jj, kk));
      }
      field(j, k) = value;
    }
  }
  return {std::move(field), t};
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  return read_snapshot(in);
}

}  // namespace ddsl
