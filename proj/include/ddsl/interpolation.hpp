#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "ddsl/phase_grid.hpp"

namespace ddsl {

namespace detail {
// floor() without a library call. Values of magnitude >= 2^52 are already
// integral and are returned unchanged.
inline double fast_floor(double s) {
  if (!(std::abs(s) < 4503599627370496.0)) return s;
  const double t = static_cast<double>(static_cast<long long>(s));
  return t > s ? t - 1.0 : t;
}
}  // namespace detail

enum class Reconstruction { Linear, Spline };

std::string_view to_string(Reconstruction r);
Reconstruction parse_reconstruction(std::string_view name);

// Tensor-product first-order Lagrange interpolation of nodal values. Periodic
// in x, zero for |v| > U. The result is a convex combination of the enclosing
// cell's corner values.
class LinearInterpolant {
 public:
  explicit LinearInterpolant(const DensityField& field)
      : values_(field.values().data()),
        nx_(field.grid().nx()),
        nv_(field.grid().nv()),
        inv_dx_(1.0 / field.grid().dx()),
        inv_dv_(1.0 / field.grid().dv()),
        U_(field.grid().U()) {}

  double operator()(double x, double v) const {
    if (!(std::abs(v) <= U_)) return 0.0;
    double xf, ax;
    split(x * inv_dx_, xf, ax);
    std::size_t j;
    if (xf >= 0.0 && xf < static_cast<double>(nx_)) {
      j = static_cast<std::size_t>(xf);
    } else {
      const auto n = static_cast<long long>(nx_);
      long long jj = static_cast<long long>(xf) % n;
      if (jj < 0) jj += n;
      j = static_cast<std::size_t>(jj);
    }
    const std::size_t j1 = (j + 1 == nx_) ? 0 : j + 1;

    double vf, av;
    split((v + U_) * inv_dv_, vf, av);
    std::size_t k = static_cast<std::size_t>(vf);
    if (k > nv_ - 2) {  // only at v = U
      av += static_cast<double>(k - (nv_ - 2));
      k = nv_ - 2;
    }

    // Convex weights: exact nodal values at av, ax in {0, 1}, and sign
    // preservation for nonnegative data.
    const double* r0 = values_ + j * nv_ + k;
    const double* r1 = values_ + j1 * nv_ + k;
    const double lo = (1.0 - av) * r0[0] + av * r0[1];
    const double hi = (1.0 - av) * r1[0] + av * r1[1];
    return (1.0 - ax) * lo + ax * hi;
  }

 private:
  // Cell index and offset of grid coordinate s. Offsets within 1e-10 of a
  // node are moved onto it, so products like k*dv/dv that miss an integer by
  // an ulp still hit the node exactly.
  static void split(double s, double& cell, double& offset) {
    cell = detail::fast_floor(s);
    offset = s - cell;
    if (offset < 1e-10) {
      offset = 0.0;
    } else if (offset > 1.0 - 1e-10) {
      cell += 1.0;
      offset = 0.0;
    }
  }

  const double* values_;
  std::size_t nx_;
  std::size_t nv_;
  double inv_dx_;
  double inv_dv_;
  double U_;
};

// Tensor-product cubic spline: periodic end conditions in x, natural (zero
// second derivative) in v, zero for |v| > U. Needs at least 4 nodes per axis.
// Does not preserve positivity.
class SplineInterpolant {
 public:
  explicit SplineInterpolant(const DensityField& field);

  double operator()(double x, double v) const;

 private:
  std::size_t nx_;
  std::size_t nv_;
  double inv_dx_;
  double inv_dv_;
  double U_;
  // B-spline coefficients, nx rows of nv + 2 (one ghost at each velocity end).
  std::vector<double> coef_;
};

double interp_linear(const DensityField& field, double x, double v);
// Builds the spline for a single evaluation; use SplineInterpolant for many.
double interp_spline(const DensityField& field, double x, double v);

}  // namespace ddsl
