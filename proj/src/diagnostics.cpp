#include "ddsl/diagnostics.hpp"

#include <gsl/gsl_fit.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_vector.h>

#include <stdexcept>

namespace ddsl {

namespace {

// Trapezoid weight of velocity node k (end nodes carry one half).
inline double vweight(std::size_t k, std::size_t nv) {
  return (k == 0 || k + 1 == nv) ? 0.5 : 1.0;
}

template <class Integrand>
double integrate(const DensityField& field, Integrand&& g) {
  const PhaseGrid& grid = field.grid();
  const std::size_t nv = grid.nv();
  double total = 0.0;
  for (std::size_t j = 0; j < grid.nx(); ++j) {
    const auto row = field.row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < nv; ++k) s += vweight(k, nv) * g(grid.v(k), row[k]);
    total += s;
  }
  return total * grid.dx() * grid.dv();
}

}  // namespace

double lp_norm(const DensityField& field, int p) {
  if (p == 1) return integrate(field, [](double, double f) { return std::abs(f); });
  if (p == 2) return std::sqrt(integrate(field, [](double, double f) { return f * f; }));
  throw std::invalid_argument("lp_norm: p must be 1 or 2");
}

double mass(const DensityField& field) {
  return integrate(field, [](double, double f) { return f; });
}

double momentum(const DensityField& field) {
  return integrate(field, [](double v, double f) { return v * f; });
}

double kinetic_energy(const DensityField& field) {
  return integrate(field, [](double v, double f) { return 0.5 * v * v * f; });
}

double potential_energy(const DensityField& field, const TrigForm& u) {
  const PhaseGrid& g = field.grid();
  const auto rho = density_rho(field);
  double s = 0.0;
  for (std::size_t j = 0; j < g.nx(); ++j) {
    auto [sn, cs] = trig_at(g.x(j), g.L());
    s += u(sn, cs) * rho[j];
  }
  return s * g.dx();
}

double potential_energy(std::span<const double> E, double dx) {
  double s = 0.0;
  for (double e : E) s += e * e;
  return 0.5 * s * dx;
}

namespace {

std::optional<double> potential_for(const DensityField& field, const SimulationConfig& cfg) {
  if (cfg.field_case == FieldCase::II) {
    const auto E = solve_field(density_rho(field), field.grid().L());
    return potential_energy(E.E, field.grid().dx());
  }
  const auto u = cfg.case_one().potential();
  if (!u) return std::nullopt;
  return potential_energy(field, *u);
}

}  // namespace

std::optional<double> total_energy(const DensityField& field, const SimulationConfig& cfg) {
  const auto pot = potential_for(field, cfg);
  if (!pot) return std::nullopt;
  return kinetic_energy(field) + *pot;
}

DiagnosticsRecord compute_diagnostics(const DensityField& field, double t,
                                      const SimulationConfig& cfg) {
  const PhaseGrid& g = field.grid();
  const std::size_t nv = g.nv();
  double m = 0.0, a = 0.0, sq = 0.0, p = 0.0, ke = 0.0;
  for (std::size_t j = 0; j < g.nx(); ++j) {
    const auto row = field.row(j);
    for (std::size_t k = 0; k < nv; ++k) {
      const double w = vweight(k, nv);
      const double f = row[k];
      const double v = g.v(k);
      m += w * f;
      a += w * std::abs(f);
      sq += w * f * f;
      p += w * v * f;
      ke += w * v * v * f;
    }
  }
  const double cell = g.dx() * g.dv();
  DiagnosticsRecord r;
  r.t = t;
  r.mass = m * cell;
  r.l1 = a * cell;
  r.l2 = std::sqrt(sq * cell);
  r.momentum = p * cell;
  r.kinetic = 0.5 * ke * cell;
  if (const auto pot = potential_for(field, cfg)) {
    r.potential = *pot;
    r.total = r.kinetic + r.potential;
  }
  r.U = g.U();
  return r;
}

ReferenceLaws reference_laws(const SimulationConfig& cfg, const DiagnosticsRecord& initial,
                             double t) {
  ReferenceLaws out;
  bool sigma_constant = true;
  double trace = 0.0;
  for (const auto& s : cfg.sigma) {
    if (!s.form().is_constant()) sigma_constant = false;
    trace += s.form().c0 * s.form().c0;
  }
  const double M = initial.mass;
  const double P0 = initial.momentum;

  if (cfg.field_case == FieldCase::II) {
    out.momentum = P0;
    if (sigma_constant && initial.has_potential()) out.total = initial.total + 0.5 * trace * M * t;
    return out;
  }
  const auto field = cfg.case_one();
  if (field.kind == FieldKind::Constant) {
    const double E0 = field.amplitude;
    out.momentum = P0 + E0 * M * t;
    if (sigma_constant) {
      out.kinetic = initial.kinetic + (E0 * P0 + 0.5 * trace * M) * t + 0.5 * E0 * E0 * M * t * t;
      if (E0 == 0.0) out.total = out.kinetic;
    }
  } else if (sigma_constant && initial.has_potential()) {
    out.total = initial.total + 0.5 * trace * M * t;
  }
  return out;
}

LinearFit fit_linear(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw std::invalid_argument("fit_linear: need at least two matching points");
  }
  LinearFit f;
  double c00, c01, c11, sumsq;
  gsl_fit_linear(t.data(), 1, y.data(), 1, t.size(), &f.intercept, &f.slope, &c00, &c01, &c11,
                 &sumsq);
  return f;
}

QuadraticFit fit_quadratic(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (y.size() != n || n < 3) {
    throw std::invalid_argument("fit_quadratic: need at least three matching points");
  }
  gsl_matrix* X = gsl_matrix_alloc(n, 3);
  gsl_vector* Y = gsl_vector_alloc(n);
  gsl_vector* c = gsl_vector_alloc(3);
  gsl_matrix* cov = gsl_matrix_alloc(3, 3);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_matrix_set(X, i, 0, 1.0);
    gsl_matrix_set(X, i, 1, t[i]);
    gsl_matrix_set(X, i, 2, t[i] * t[i]);
    gsl_vector_set(Y, i, y[i]);
  }
  gsl_multifit_linear_workspace* ws = gsl_multifit_linear_alloc(n, 3);
  double chisq;
  gsl_multifit_linear(X, Y, c, cov, &chisq, ws);
  QuadraticFit f{gsl_vector_get(c, 0), gsl_vector_get(c, 1), gsl_vector_get(c, 2)};
  gsl_multifit_linear_free(ws);
  gsl_matrix_free(X);
  gsl_vector_free(Y);
  gsl_vector_free(c);
  gsl_matrix_free(cov);
  return f;
}

}  // namespace ddsl
