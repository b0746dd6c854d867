#include "ddsl/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ddsl {

namespace {
double wavenumber(double L) { return 2.0 * std::numbers::pi / L; }
}  // namespace

std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Constant:
      return "constant";
    case FieldKind::Cosine:
      return "cosine";
    case FieldKind::Gradient:
      return "gradient";
  }
  return "?";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "constant") return FieldKind::Constant;
  if (name == "cosine") return FieldKind::Cosine;
  if (name == "gradient") return FieldKind::Gradient;
  throw std::invalid_argument("unknown field kind '" + std::string(name) +
                              "' (expected constant, cosine or gradient)");
}

TrigForm CaseOneField::form() const {
  switch (kind) {
    case FieldKind::Constant:
      return {amplitude, 0.0, 0.0};
    case FieldKind::Cosine:
      return {0.0, 0.0, amplitude};
    case FieldKind::Gradient:
      return {0.0, 0.0, -amplitude * wavenumber(L)};
  }
  return {};
}

std::optional<TrigForm> CaseOneField::potential() const {
  switch (kind) {
    case FieldKind::Constant:
      if (amplitude == 0.0) return TrigForm{};
      return std::nullopt;
    case FieldKind::Cosine:
      return TrigForm{0.0, -amplitude / wavenumber(L), 0.0};
    case FieldKind::Gradient:
      return TrigForm{0.0, amplitude, 0.0};
  }
  return std::nullopt;
}

std::string_view to_string(SigmaKind k) {
  switch (k) {
    case SigmaKind::Constant:
      return "constant";
    case SigmaKind::Sine:
      return "sine";
    case SigmaKind::ShiftedCosine:
      return "shifted_cosine";
  }
  return "?";
}

SigmaKind parse_sigma_kind(std::string_view name) {
  if (name == "constant") return SigmaKind::Constant;
  if (name == "sine") return SigmaKind::Sine;
  if (name == "shifted_cosine") return SigmaKind::ShiftedCosine;
  throw std::invalid_argument("unknown sigma kind '" + std::string(name) +
                              "' (expected constant, sine or shifted_cosine)");
}

TrigForm SigmaSpec::form() const {
  switch (kind) {
    case SigmaKind::Constant:
      return {amplitude, 0.0, 0.0};
    case SigmaKind::Sine:
      return {0.0, amplitude, 0.0};
    case SigmaKind::ShiftedCosine:
      return {amplitude, 0.0, amplitude};
  }
  return {};
}

SigmaEval make_sigma(std::span<const SigmaSpec> specs, double L) {
  std::vector<TrigForm> forms;
  forms.reserve(specs.size());
  for (const auto& s : specs) forms.push_back(s.form());
  return SigmaEval(std::move(forms), L);
}

std::vector<double> density_rho(const DensityField& field) {
  const PhaseGrid& g = field.grid();
  const std::size_t nv = g.nv();
  std::vector<double> rho(g.nx());
  for (std::size_t j = 0; j < g.nx(); ++j) {
    const auto row = field.row(j);
    double s = 0.5 * (row[0] + row[nv - 1]);
    for (std::size_t k = 1; k + 1 < nv; ++k) s += row[k];
    rho[j] = s * g.dv();
  }
  return rho;
}

std::vector<double> kernel_field(std::span<const double> rho, double L) {
  const std::size_t n = rho.size();
  if (n == 0) throw std::invalid_argument("kernel_field: empty density");
  const double dx = L / static_cast<double>(n);

  // g_m = (rho_m - 1) dx;  E_j = sum_m (m/n) g_m - sum_{m > j} g_m - g_j / 2.
  std::vector<double> g(n);
  double first = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    g[m] = (rho[m] - 1.0) * dx;
    first += (static_cast<double>(m) / static_cast<double>(n)) * g[m];
  }
  std::vector<double> E(n);
  double suffix = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    E[j] = first - suffix - 0.5 * g[j];
    suffix += g[j];
  }
  double mean = 0.0;
  for (double e : E) mean += e;
  mean /= static_cast<double>(n);
  for (double& e : E) e -= mean;
  return E;
}

CaseTwoField solve_field(std::span<const double> rho, double L) {
  CaseTwoField out;
  out.E = kernel_field(rho, L);
  out.bound = 2.0 * L;
  for (double& e : out.E) {
    const double c = std::clamp(e, -out.bound, out.bound);
    if (c != e) ++out.clamped;
    e = c;
  }
  return out;
}

FieldEval field_eval(const CaseTwoField& field, double L) {
  return FieldEval::nodal(field.E, L, field.bound);
}

}  // namespace ddsl
