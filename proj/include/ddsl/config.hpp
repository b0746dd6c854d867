#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ddsl/characteristics.hpp"
#include "ddsl/field.hpp"
#include "ddsl/interpolation.hpp"

namespace ddsl {

enum class FieldCase { I, II };
enum class InitialKind { Landau, TwoStream, Custom };
// adaptive: threshold-driven growth; fixed: U stays at U0 (plain truncation);
// nonadaptive: truncated increments and unconditional growth every step.
enum class DomainPolicy { Adaptive, Fixed, NonAdaptive };

std::string_view to_string(FieldCase c);
std::string_view to_string(InitialKind k);
std::string_view to_string(DomainPolicy p);
FieldCase parse_field_case(std::string_view s);
InitialKind parse_initial_kind(std::string_view s);
DomainPolicy parse_domain_policy(std::string_view s);

struct SimulationConfig {
  FieldCase field_case = FieldCase::I;
  double L = 1.0;
  double T = 1.0;
  std::size_t N = 1;
  double dx = 1.0 / 64;
  double dv = 1.0 / 64;
  // Zero selects the smallest admissible value from the initial density.
  double U0 = 6.0;
  double epsilon0 = 1e-8;
  IntegratorKind integrator = IntegratorKind::SSM;
  Reconstruction reconstruction = Reconstruction::Linear;
  DomainPolicy domain = DomainPolicy::Adaptive;

  FieldKind field_kind = FieldKind::Constant;  // Case I only
  double field_amplitude = 0.0;
  std::vector<SigmaSpec> sigma;  // K = sigma.size()

  InitialKind initial = InitialKind::Landau;
  double alpha = 0.05;
  // Used when initial == Custom; not serializable.
  std::function<double(double, double)> custom_initial;

  std::uint64_t seed = 1;
  std::size_t snapshot_every = 0;  // steps between snapshots; 0 disables

  // Experiment settings.
  std::size_t samples = 1;
  std::size_t levels = 3;
  double error_window = 1.0;
  double node_budget = 2e8;
  std::size_t repetitions = 3;
  unsigned threads = 1;

  double tau() const { return T / static_cast<double>(N); }
  std::size_t K() const { return sigma.size(); }
  CaseOneField case_one() const { return {field_kind, field_amplitude, L}; }
  // Sup bound of |E| used by the displacement bound.
  double Emax() const { return field_case == FieldCase::II ? 2.0 * L : case_one().Emax(); }
  std::vector<double> sigma_bounds() const;
  std::function<double(double, double)> initial_density() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

}  // namespace ddsl
