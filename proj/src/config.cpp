#include "ddsl/config.hpp"

#include <fmt/format.h>

#include "ddsl/errors.hpp"
#include "ddsl/phase_grid.hpp"
#include "ddsl/solver.hpp"

namespace ddsl {

std::string_view to_string(FieldCase c) { return c == FieldCase::II ? "II" : "I"; }

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Landau:
      return "landau";
    case InitialKind::TwoStream:
      return "two_stream";
    case InitialKind::Custom:
      return "custom";
  }
  return "?";
}

std::string_view to_string(DomainPolicy p) {
  switch (p) {
    case DomainPolicy::Adaptive:
      return "adaptive";
    case DomainPolicy::Fixed:
      return "fixed";
    case DomainPolicy::NonAdaptive:
      return "nonadaptive";
  }
  return "?";
}

FieldCase parse_field_case(std::string_view s) {
  if (s == "I" || s == "i" || s == "1") return FieldCase::I;
  if (s == "II" || s == "ii" || s == "2") return FieldCase::II;
  throw ConfigError(fmt::format("unknown case '{}' (expected I or II)", s));
}

InitialKind parse_initial_kind(std::string_view s) {
  if (s == "landau") return InitialKind::Landau;
  if (s == "two_stream") return InitialKind::TwoStream;
  if (s == "custom") return InitialKind::Custom;
  throw ConfigError(fmt::format("unknown initial density '{}' (expected landau or two_stream)", s));
}

DomainPolicy parse_domain_policy(std::string_view s) {
  if (s == "adaptive") return DomainPolicy::Adaptive;
  if (s == "fixed") return DomainPolicy::Fixed;
  if (s == "nonadaptive") return DomainPolicy::NonAdaptive;
  throw ConfigError(
      fmt::format("unknown domain policy '{}' (expected adaptive, fixed or nonadaptive)", s));
}

std::vector<double> SimulationConfig::sigma_bounds() const {
  std::vector<double> b;
  for (const auto& s : sigma) b.push_back(s.form().sup());
  return b;
}

std::function<double(double, double)> SimulationConfig::initial_density() const {
  const double a = alpha;
  const double len = L;
  switch (initial) {
    case InitialKind::Landau:
      return [a, len](double x, double v) { return initial_density_landau(x, v, a, len); };
    case InitialKind::TwoStream:
      return [a, len](double x, double v) { return initial_density_two_stream(x, v, a, len); };
    case InitialKind::Custom:
      if (!custom_initial) throw ConfigError("initial = custom but no density function was given");
      return custom_initial;
  }
  throw ConfigError("invalid initial density kind");
}

void SimulationConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(fmt::format("{} must be > 0", name));
  };
  positive(L, "L");
  positive(T, "T");
  positive(dx, "dx");
  positive(dv, "dv");
  positive(epsilon0, "epsilon0");
  auto finite = [](double x, const char* name) {
    if (!std::isfinite(x)) throw ConfigError(fmt::format("{} must be finite", name));
  };
  finite(field_amplitude, "field amplitude");
  finite(alpha, "alpha");
  for (const auto& s : sigma) finite(s.amplitude, "sigma amplitude");
  if (!(U0 >= 0.0)) throw ConfigError("U0 must be >= 0 (0 selects it automatically)");
  try {
    aligned_ratio(L, dx, "L/dx");
    if (U0 > 0.0) aligned_ratio(U0, dv, "U0/dv");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (reconstruction == Reconstruction::Spline && L / dx < 3.5) {
    throw ConfigError("spline reconstruction needs at least 4 position nodes");
  }
  if (initial == InitialKind::Custom && !custom_initial) {
    throw ConfigError("initial = custom but no density function was given");
  }
  if (!(error_window > 0.0)) throw ConfigError("error_window must be > 0");
  if (samples == 0) throw ConfigError("samples must be >= 1");
  if (threads == 0) throw ConfigError("threads must be >= 1");
}

}  // namespace ddsl
