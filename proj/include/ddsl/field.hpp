#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ddsl/characteristics.hpp"
#include "ddsl/phase_grid.hpp"

namespace ddsl {

// Closed-form field kinds on a torus of length L (w = 2*pi/L):
//   constant  E = a                     (no periodic potential)
//   cosine    E = a cos(w x)            u = -(a/w) sin(w x)
//   gradient  u = a sin(w x)            E = -u' = -a w cos(w x)
enum class FieldKind { Constant, Cosine, Gradient };

std::string_view to_string(FieldKind k);
FieldKind parse_field_kind(std::string_view name);

struct CaseOneField {
  FieldKind kind = FieldKind::Constant;
  double amplitude = 0.0;
  double L = 1.0;

  TrigForm form() const;
  double Emax() const { return form().sup(); }
  // Potential u with E = -u'; empty for the constant kind.
  std::optional<TrigForm> potential() const;
};

// Noise coefficient kinds (w = 2*pi/L): constant a, sine a sin(w x),
// shifted_cosine a (cos(w x) + 1).
enum class SigmaKind { Constant, Sine, ShiftedCosine };

std::string_view to_string(SigmaKind k);
SigmaKind parse_sigma_kind(std::string_view name);

struct SigmaSpec {
  SigmaKind kind = SigmaKind::Constant;
  double amplitude = 0.0;

  TrigForm form() const;
  bool operator==(const SigmaSpec&) const = default;
};

SigmaEval make_sigma(std::span<const SigmaSpec> specs, double L);

// Composite trapezoid over [-U, U] at each position node.
std::vector<double> density_rho(const DensityField& field);

struct CaseTwoField {
  std::vector<double> E;  // nodal values on the x-grid, clamped
  double bound = 0.0;     // 2L
  std::size_t clamped = 0;
};

// Kernel sum E_j = sum_m K(x_j, y_m) (rho_m - 1) dx with K(x, y) = y/L - 1 for
// x < y and y/L for y < x. On the diagonal the two branches are averaged and the
// discrete mean is then removed; this keeps the sum exactly mean-free and
// second-order accurate. No clamping. O(nx).
std::vector<double> kernel_field(std::span<const double> rho, double L);

// kernel_field clamped into [-2L, 2L].
CaseTwoField solve_field(std::span<const double> rho, double L);

// Field evaluator for one step: analytic for Case I, nodal with bound 2L for Case II.
FieldEval field_eval(const CaseTwoField& field, double L);

}  // namespace ddsl
