#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace ddsl {

enum class IntegratorKind { SEM, LTSM, SSM, EM_BASELINE };

std::string_view to_string(IntegratorKind kind);
IntegratorKind parse_integrator(std::string_view name);
// SEM, LTSM and SSM are volume preserving; the EM baseline is not.
constexpr bool is_volume_preserving(IntegratorKind kind) {
  return kind != IntegratorKind::EM_BASELINE;
}

struct PhasePoint {
  double x = 0.0;
  double v = 0.0;
};

// Forward-mode dual number carrying the gradient with respect to (x, v).
struct Dual {
  double val = 0.0;
  double dx = 0.0;
  double dv = 0.0;

  friend Dual operator+(Dual a, Dual b) { return {a.val + b.val, a.dx + b.dx, a.dv + b.dv}; }
  friend Dual operator-(Dual a, Dual b) { return {a.val - b.val, a.dx - b.dx, a.dv - b.dv}; }
  friend Dual operator*(Dual a, Dual b) {
    return {a.val * b.val, a.dx * b.val + a.val * b.dx, a.dv * b.val + a.val * b.dv};
  }
  friend Dual operator+(Dual a, double s) { return {a.val + s, a.dx, a.dv}; }
  friend Dual operator+(double s, Dual a) { return a + s; }
  friend Dual operator-(Dual a, double s) { return {a.val - s, a.dx, a.dv}; }
  friend Dual operator-(double s, Dual a) { return {s - a.val, -a.dx, -a.dv}; }
  friend Dual operator*(Dual a, double s) { return {a.val * s, a.dx * s, a.dv * s}; }
  friend Dual operator*(double s, Dual a) { return a * s; }
  friend Dual operator/(Dual a, double s) { return a * (1.0 / s); }
};

inline Dual sin(Dual a) {
  const double c = std::cos(a.val);
  return {std::sin(a.val), c * a.dx, c * a.dv};
}
inline Dual cos(Dual a) {
  const double s = -std::sin(a.val);
  return {std::cos(a.val), s * a.dx, s * a.dv};
}

namespace detail {
inline double value_of(double a) { return a; }
inline double value_of(const Dual& a) { return a.val; }

// Shift into [0, L); derivatives pass through unchanged.
template <class T>
T wrap(const T& x, double L) {
  return x - L * std::floor(value_of(x) / L);
}
}  // namespace detail

// c0 + cs*sin(2*pi*x/L) + cc*cos(2*pi*x/L). Every closed-form coefficient
// used here (constant, cosine, sine, shifted cosine, gradient of a sine
// potential) is of this form.
struct TrigForm {
  double c0 = 0.0;
  double cs = 0.0;
  double cc = 0.0;

  template <class T>
  T operator()(const T& s, const T& c) const {
    return c0 + cs * s + cc * c;
  }
  double sup() const { return std::abs(c0) + std::hypot(cs, cc); }
  bool is_zero() const { return c0 == 0.0 && cs == 0.0 && cc == 0.0; }
  bool is_constant() const { return cs == 0.0 && cc == 0.0; }
  // d/dx of the form on a torus of length L.
  TrigForm derivative(double L) const {
    const double w = 2.0 * std::numbers::pi / L;
    return {0.0, -w * cc, w * cs};
  }
};

template <class T>
std::pair<T, T> trig_at(const T& x, double L) {
  using std::cos;
  using std::sin;
  const T theta = x * (2.0 * std::numbers::pi / L);
  return {sin(theta), cos(theta)};
}

// Electric field E(t, .) frozen at one time level, with a certified sup bound.
// Either a closed form (autonomous) or nodal values on the x-grid evaluated by
// periodic linear interpolation.
class FieldEval {
 public:
  FieldEval() = default;
  static FieldEval analytic(TrigForm form, double L);
  static FieldEval nodal(std::vector<double> values, double L, double bound);

  double operator()(double t, double x) const;
  double bound() const { return bound_; }
  double L() const { return L_; }

  bool is_analytic() const { return nodes_.empty(); }
  const TrigForm& form() const { return form_; }
  std::span<const double> nodes() const { return nodes_; }

 private:
  TrigForm form_;
  std::vector<double> nodes_;
  double L_ = 1.0;
  double bound_ = 0.0;
};

// Noise coefficients (sigma_1, ..., sigma_K)(x).
class SigmaEval {
 public:
  SigmaEval() = default;
  SigmaEval(std::vector<TrigForm> components, double L);

  std::size_t components() const { return comps_.size(); }
  double L() const { return L_; }
  double operator()(std::size_t k, double x) const;
  std::vector<double> bounds() const;
  // sum_k sigma_k(.) * dbeta_k as a single form.
  TrigForm combined(std::span<const double> dbeta) const;
  const std::vector<TrigForm>& forms() const { return comps_; }

 private:
  std::vector<TrigForm> comps_;
  double L_ = 1.0;
};

struct AnalyticForce {
  TrigForm form;
  double L = 1.0;

  template <class T>
  T operator()(const T& x) const {
    if (form.is_constant()) return T{} + form.c0;
    auto [s, c] = trig_at(x, L);
    return form(s, c);
  }
};

struct NodalForce {
  std::span<const double> nodes;
  double dx = 1.0;
  double L = 1.0;

  template <class T>
  T operator()(const T& x) const {
    const T xw = detail::wrap(x, L);
    const T xi = xw / dx;
    const double base = std::floor(detail::value_of(xi));
    const T frac = xi - base;
    const std::size_t n = nodes.size();
    std::size_t j = static_cast<std::size_t>(base);
    if (j >= n) j = n - 1;  // xw rounded up to L
    const double a = nodes[j];
    const double b = nodes[(j + 1) % n];
    return a + (b - a) * frac;
  }
};

// One-step inverse maps for a fixed step. `kick` is sum_k sigma_k(.) dbeta_k.
template <class Force>
struct InverseKernel {
  Force force;
  TrigForm kick;
  double tau = 0.0;
  double L = 1.0;

  template <class T>
  T kick_at(const T& x) const {
    if (kick.is_constant()) return T{} + kick.c0;
    auto [s, c] = trig_at(x, L);
    return kick(s, c);
  }

  // E and kick at one point, sharing the trigonometric evaluation when both
  // are closed forms.
  template <class T>
  std::pair<T, T> both_at(const T& x) const {
    if constexpr (std::is_same_v<Force, AnalyticForce>) {
      if (force.form.is_constant() && kick.is_constant()) {
        return {T{} + force.form.c0, T{} + kick.c0};
      }
      auto [s, c] = trig_at(x, L);
      return {force.form(s, c), kick(s, c)};
    } else {
      return {force(x), kick_at(x)};
    }
  }

  template <IntegratorKind Kind, class T>
  std::pair<T, T> step(const T& x, const T& v) const {
    if constexpr (Kind == IntegratorKind::SEM) {
      const T X = x - tau * v;
      auto [E, k] = both_at(X);
      return {detail::wrap(X, L), v - tau * E - k};
    } else if constexpr (Kind == IntegratorKind::LTSM) {
      const T E = force(x);
      const T X = x - tau * v + (tau * tau) * E;
      return {detail::wrap(X, L), v - tau * E - kick_at(X)};
    } else if constexpr (Kind == IntegratorKind::SSM) {
      const T xh = x - (0.5 * tau) * v;
      auto [E, k] = both_at(xh);
      const T V = v - tau * E - k;
      return {detail::wrap(x - (0.5 * tau) * (v + V), L), V};
    } else {
      auto [E, k] = both_at(x);
      return {detail::wrap(x - tau * v, L), v - tau * E - k};
    }
  }
};

// Calls fn(kernel) with the kernel type matching the field representation.
template <class Fn>
decltype(auto) with_kernel(const FieldEval& field, const TrigForm& kick, double tau, Fn&& fn) {
  const double L = field.L();
  if (field.is_analytic()) {
    return fn(InverseKernel<AnalyticForce>{AnalyticForce{field.form(), L}, kick, tau, L});
  }
  const auto nodes = field.nodes();
  const double dx = L / static_cast<double>(nodes.size());
  return fn(InverseKernel<NodalForce>{NodalForce{nodes, dx, L}, kick, tau, L});
}

// Calls fn(std::integral_constant<IntegratorKind, K>{}).
template <class Fn>
decltype(auto) with_integrator(IntegratorKind kind, Fn&& fn) {
  switch (kind) {
    case IntegratorKind::SEM:
      return fn(std::integral_constant<IntegratorKind, IntegratorKind::SEM>{});
    case IntegratorKind::LTSM:
      return fn(std::integral_constant<IntegratorKind, IntegratorKind::LTSM>{});
    case IntegratorKind::SSM:
      return fn(std::integral_constant<IntegratorKind, IntegratorKind::SSM>{});
    case IntegratorKind::EM_BASELINE:
      break;
  }
  return fn(std::integral_constant<IntegratorKind, IntegratorKind::EM_BASELINE>{});
}

// Departure point of the node `arrival` over [t_prev, t_prev + tau]. Position
// is reduced into [0, L); velocity is never wrapped.
PhasePoint inverse_step(IntegratorKind kind, PhasePoint arrival, double tau, double t_prev,
                        const FieldEval& field, const SigmaEval& sigma,
                        std::span<const double> dbeta);

PhasePoint inverse_step_sem(PhasePoint arrival, double tau, double t_prev,
                            const FieldEval& field, const SigmaEval& sigma,
                            std::span<const double> dbeta);
PhasePoint inverse_step_ltsm(PhasePoint arrival, double tau, double t_prev,
                             const FieldEval& field, const SigmaEval& sigma,
                             std::span<const double> dbeta);
PhasePoint inverse_step_ssm(PhasePoint arrival, double tau, double t_prev,
                            const FieldEval& field, const SigmaEval& sigma,
                            std::span<const double> dbeta);
PhasePoint inverse_step_em(PhasePoint arrival, double tau, double t_prev,
                           const FieldEval& field, const SigmaEval& sigma,
                           std::span<const double> dbeta);

// Central finite-difference determinant of the inverse map's Jacobian.
double jacobian_det(IntegratorKind kind, PhasePoint point, double tau, double t_prev,
                    const FieldEval& field, const SigmaEval& sigma,
                    std::span<const double> dbeta, double spacing = 1e-6);

// Determinant by forward-mode differentiation of the same map.
double jacobian_det_exact(IntegratorKind kind, PhasePoint point, double tau, double t_prev,
                          const FieldEval& field, const SigmaEval& sigma,
                          std::span<const double> dbeta);

// tau * Emax + sum_k sigmax_k |dbeta_k|: sup of |V - v| over one inverse step.
double displacement_bound(double tau, double Emax, std::span<const double> sigmax,
                          std::span<const double> dbeta);

}  // namespace ddsl
