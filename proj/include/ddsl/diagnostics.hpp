#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ddsl/config.hpp"
#include "ddsl/phase_grid.hpp"

namespace ddsl {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;  // integral of f
  double l1 = 0.0;
  double l2 = 0.0;
  double momentum = 0.0;
  double kinetic = 0.0;
  // NaN when the field has no potential (constant Case I field).
  double potential = std::numeric_limits<double>::quiet_NaN();
  double total = std::numeric_limits<double>::quiet_NaN();
  double U = 0.0;
  bool grew = false;

  bool has_potential() const { return !std::isnan(potential); }
};

// All quadratures: composite trapezoid in v over [-U, U], periodic sum in x.
double lp_norm(const DensityField& field, int p);
double mass(const DensityField& field);
double momentum(const DensityField& field);
double kinetic_energy(const DensityField& field);

// Potential energy: integral of u(x) f for a closed-form potential u.
double potential_energy(const DensityField& field, const TrigForm& u);
// Potential energy of a nodal field: (1/2) integral of E^2.
double potential_energy(std::span<const double> E, double dx);

// Kinetic plus potential for the configured field model; empty for a Case I
// field without a potential.
std::optional<double> total_energy(const DensityField& field, const SimulationConfig& cfg);

DiagnosticsRecord compute_diagnostics(const DensityField& field, double t,
                                      const SimulationConfig& cfg);

// Expected mean curves under the constant-coefficient hypotheses. Each entry
// is empty when the configuration falls outside that law's hypotheses.
struct ReferenceLaws {
  std::optional<double> momentum;
  std::optional<double> kinetic;
  std::optional<double> total;
};

// `initial` supplies P0, K0, H0 and the mass M. With M = 1:
//   momentum  P0 + E0 t                                  (constant E0)
//   kinetic   K0 + (E0 P0 + tr/2) t + E0^2 t^2 / 2        (constant E0, constant sigma)
//   total     H0 + tr t / 2                               (gradient or Case II, constant sigma)
//   momentum  P0                                          (Case II)
// where tr = sum_k sigma_k^2. For M != 1 the source terms scale with M.
ReferenceLaws reference_laws(const SimulationConfig& cfg, const DiagnosticsRecord& initial,
                             double t);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};
struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
LinearFit fit_linear(std::span<const double> t, std::span<const double> y);
QuadraticFit fit_quadratic(std::span<const double> t, std::span<const double> y);

}  // namespace ddsl
