#include "ddsl/characteristics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddsl {

std::string_view to_string(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::SEM:
      return "sem";
    case IntegratorKind::LTSM:
      return "ltsm";
    case IntegratorKind::SSM:
      return "ssm";
    case IntegratorKind::EM_BASELINE:
      return "em";
  }
  return "?";
}

IntegratorKind parse_integrator(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "sem") return IntegratorKind::SEM;
  if (lower == "ltsm") return IntegratorKind::LTSM;
  if (lower == "ssm") return IntegratorKind::SSM;
  if (lower == "em" || lower == "em_baseline") return IntegratorKind::EM_BASELINE;
  throw std::invalid_argument("unknown integrator '" + std::string(name) +
                              "' (expected sem, ltsm, ssm or em)");
}

FieldEval FieldEval::analytic(TrigForm form, double L) {
  FieldEval f;
  f.form_ = form;
  f.L_ = L;
  f.bound_ = form.sup();
  return f;
}

FieldEval FieldEval::nodal(std::vector<double> values, double L, double bound) {
  if (values.empty()) throw std::invalid_argument("FieldEval::nodal: no values");
  for (double e : values) {
    if (!(std::abs(e) <= bound)) {
      throw std::invalid_argument("FieldEval::nodal: value exceeds the certified bound");
    }
  }
  FieldEval f;
  f.nodes_ = std::move(values);
  f.L_ = L;
  f.bound_ = bound;
  return f;
}

double FieldEval::operator()(double /*t*/, double x) const {
  if (is_analytic()) return AnalyticForce{form_, L_}(x);
  return NodalForce{nodes_, L_ / static_cast<double>(nodes_.size()), L_}(x);
}

SigmaEval::SigmaEval(std::vector<TrigForm> components, double L)
    : comps_(std::move(components)), L_(L) {}

double SigmaEval::operator()(std::size_t k, double x) const {
  auto [s, c] = trig_at(x, L_);
  return comps_.at(k)(s, c);
}

std::vector<double> SigmaEval::bounds() const {
  std::vector<double> out;
  out.reserve(comps_.size());
  for (const auto& f : comps_) out.push_back(f.sup());
  return out;
}

TrigForm SigmaEval::combined(std::span<const double> dbeta) const {
  if (dbeta.size() != comps_.size()) {
    throw std::invalid_argument("SigmaEval::combined: dbeta has wrong length");
  }
  TrigForm out;
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    out.c0 += comps_[k].c0 * dbeta[k];
    out.cs += comps_[k].cs * dbeta[k];
    out.cc += comps_[k].cc * dbeta[k];
  }
  return out;
}

namespace {

template <class T>
std::pair<T, T> apply(IntegratorKind kind, const T& x, const T& v, double tau,
                      const FieldEval& field, const TrigForm& kick) {
  return with_kernel(field, kick, tau, [&](const auto& kernel) {
    return with_integrator(kind, [&](auto k) {
      return kernel.template step<decltype(k)::value>(x, v);
    });
  });
}

void check_l(const FieldEval& field, const SigmaEval& sigma) {
  if (sigma.components() > 0 && sigma.L() != field.L()) {
    throw std::invalid_argument("field and sigma live on tori of different length");
  }
}

}  // namespace

PhasePoint inverse_step(IntegratorKind kind, PhasePoint arrival, double tau, double /*t_prev*/,
                        const FieldEval& field, const SigmaEval& sigma,
                        std::span<const double> dbeta) {
  check_l(field, sigma);
  const TrigForm kick = sigma.combined(dbeta);
  auto [X, V] = apply(kind, arrival.x, arrival.v, tau, field, kick);
  return {X, V};
}

PhasePoint inverse_step_sem(PhasePoint arrival, double tau, double t_prev,
                            const FieldEval& field, const SigmaEval& sigma,
                            std::span<const double> dbeta) {
  return inverse_step(IntegratorKind::SEM, arrival, tau, t_prev, field, sigma, dbeta);
}

PhasePoint inverse_step_ltsm(PhasePoint arrival, double tau, double t_prev,
                             const FieldEval& field, const SigmaEval& sigma,
                             std::span<const double> dbeta) {
  return inverse_step(IntegratorKind::LTSM, arrival, tau, t_prev, field, sigma, dbeta);
}

PhasePoint inverse_step_ssm(PhasePoint arrival, double tau, double t_prev,
                            const FieldEval& field, const SigmaEval& sigma,
                            std::span<const double> dbeta) {
  return inverse_step(IntegratorKind::SSM, arrival, tau, t_prev, field, sigma, dbeta);
}

PhasePoint inverse_step_em(PhasePoint arrival, double tau, double t_prev,
                           const FieldEval& field, const SigmaEval& sigma,
                           std::span<const double> dbeta) {
  return inverse_step(IntegratorKind::EM_BASELINE, arrival, tau, t_prev, field, sigma, dbeta);
}

double jacobian_det(IntegratorKind kind, PhasePoint p, double tau, double /*t_prev*/,
                    const FieldEval& field, const SigmaEval& sigma,
                    std::span<const double> dbeta, double h) {
  check_l(field, sigma);
  const TrigForm kick = sigma.combined(dbeta);
  const double L = field.L();
  auto map = [&](double x, double v) { return apply(kind, x, v, tau, field, kick); };
  // Position differences are taken on the torus.
  auto dpos = [L](double a, double b) {
    double d = a - b;
    d -= L * std::round(d / L);
    return d;
  };
  const auto xp = map(p.x + h, p.v);
  const auto xm = map(p.x - h, p.v);
  const auto vp = map(p.x, p.v + h);
  const auto vm = map(p.x, p.v - h);
  const double dXdx = dpos(xp.first, xm.first) / (2 * h);
  const double dVdx = (xp.second - xm.second) / (2 * h);
  const double dXdv = dpos(vp.first, vm.first) / (2 * h);
  const double dVdv = (vp.second - vm.second) / (2 * h);
  return dXdx * dVdv - dXdv * dVdx;
}

double jacobian_det_exact(IntegratorKind kind, PhasePoint p, double tau, double /*t_prev*/,
                          const FieldEval& field, const SigmaEval& sigma,
                          std::span<const double> dbeta) {
  check_l(field, sigma);
  const TrigForm kick = sigma.combined(dbeta);
  const Dual x{p.x, 1.0, 0.0};
  const Dual v{p.v, 0.0, 1.0};
  auto [X, V] = apply(kind, x, v, tau, field, kick);
  return X.dx * V.dv - X.dv * V.dx;
}

double displacement_bound(double tau, double Emax, std::span<const double> sigmax,
                          std::span<const double> dbeta) {
  if (sigmax.size() != dbeta.size()) {
    throw std::invalid_argument("displacement_bound: sigmax and dbeta differ in length");
  }
  if (Emax < 0.0) throw std::invalid_argument("displacement_bound: Emax must be >= 0");
  double xi = tau * Emax;
  for (std::size_t k = 0; k < sigmax.size(); ++k) {
    if (sigmax[k] < 0.0) throw std::invalid_argument("displacement_bound: sigmax must be >= 0");
    xi += sigmax[k] * std::abs(dbeta[k]);
  }
  return xi;
}

}  // namespace ddsl
