#include "ddsl/interpolation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_linalg.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace ddsl {

std::string_view to_string(Reconstruction r) {
  return r == Reconstruction::Spline ? "spline" : "linear";
}

Reconstruction parse_reconstruction(std::string_view name) {
  if (name == "linear") return Reconstruction::Linear;
  if (name == "spline") return Reconstruction::Spline;
  throw std::invalid_argument("unknown reconstruction '" + std::string(name) +
                              "' (expected linear or spline)");
}

namespace {

void check_gsl(int status, const char* what) {
  if (status != GSL_SUCCESS) {
    throw std::runtime_error(std::string(what) + ": " + gsl_strerror(status));
  }
}

// Uniform cubic B-spline weights for the four coefficients around offset t in [0, 1).
std::array<double, 4> bspline_weights(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double u = 1.0 - t;
  return {u * u * u / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
          (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0, t3 / 6.0};
}

}  // namespace

SplineInterpolant::SplineInterpolant(const DensityField& field)
    : nx_(field.grid().nx()),
      nv_(field.grid().nv()),
      inv_dx_(1.0 / field.grid().dx()),
      inv_dv_(1.0 / field.grid().dv()),
      U_(field.grid().U()) {
  if (nx_ < 4 || nv_ < 4) {
    throw std::invalid_argument("spline reconstruction needs at least 4 nodes per axis");
  }
  const std::size_t w = nv_ + 2;
  coef_.assign(nx_ * w, 0.0);

  // Silence GSL's abort-on-error handler; failures are reported via status codes.
  gsl_error_handler_t* old_handler = gsl_set_error_handler_off();

  // Natural ends in v: coefficient at each end node equals the data value and
  // the ghost is its linear extrapolation. Interior: d[k-1] + 4 d[k] + d[k+1] = 6 f[k].
  const std::size_t m = nv_ - 2;
  gsl_vector* diag = gsl_vector_alloc(m);
  gsl_vector* off = gsl_vector_alloc(m > 1 ? m - 1 : 1);
  gsl_vector* rhs = gsl_vector_alloc(m);
  gsl_vector* sol = gsl_vector_alloc(m);
  gsl_vector_set_all(diag, 4.0);
  gsl_vector_set_all(off, 1.0);
  for (std::size_t j = 0; j < nx_; ++j) {
    const auto f = field.row(j);
    double* d = coef_.data() + j * w + 1;  // d[-1] .. d[nv] addressable
    d[0] = f[0];
    d[nv_ - 1] = f[nv_ - 1];
    for (std::size_t i = 0; i < m; ++i) gsl_vector_set(rhs, i, 6.0 * f[i + 1]);
    *gsl_vector_ptr(rhs, 0) -= d[0];
    *gsl_vector_ptr(rhs, m - 1) -= d[nv_ - 1];
    if (m == 1) {
      gsl_vector_set(sol, 0, gsl_vector_get(rhs, 0) / 4.0);
    } else {
      check_gsl(gsl_linalg_solve_symm_tridiag(diag, off, rhs, sol), "spline v-solve");
    }
    for (std::size_t i = 0; i < m; ++i) d[i + 1] = gsl_vector_get(sol, i);
    d[-1] = 2.0 * d[0] - d[1];
    d[nv_] = 2.0 * d[nv_ - 1] - d[nv_ - 2];
  }
  gsl_vector_free(diag);
  gsl_vector_free(off);
  gsl_vector_free(rhs);
  gsl_vector_free(sol);

  // Periodic in x: cyclic system c[j-1] + 4 c[j] + c[j+1] = 6 d[j] per column.
  gsl_vector* cdiag = gsl_vector_alloc(nx_);
  gsl_vector* coff = gsl_vector_alloc(nx_);
  gsl_vector* col = gsl_vector_alloc(nx_);
  gsl_vector* csol = gsl_vector_alloc(nx_);
  gsl_vector_set_all(cdiag, 4.0);
  gsl_vector_set_all(coff, 1.0);
  for (std::size_t k = 0; k < w; ++k) {
    for (std::size_t j = 0; j < nx_; ++j) gsl_vector_set(col, j, 6.0 * coef_[j * w + k]);
    check_gsl(gsl_linalg_solve_symm_cyc_tridiag(cdiag, coff, col, csol), "spline x-solve");
    for (std::size_t j = 0; j < nx_; ++j) coef_[j * w + k] = gsl_vector_get(csol, j);
  }
  gsl_vector_free(cdiag);
  gsl_vector_free(coff);
  gsl_vector_free(col);
  gsl_vector_free(csol);

  gsl_set_error_handler(old_handler);
}

double SplineInterpolant::operator()(double x, double v) const {
  if (!(std::abs(v) <= U_)) return 0.0;
  const double xi = x * inv_dx_;
  const double xf = std::floor(xi);
  const double tx = xi - xf;
  const auto n = static_cast<long long>(nx_);
  long long j = static_cast<long long>(xf) % n;
  if (j < 0) j += n;

  const double vk = (v + U_) * inv_dv_;
  std::size_t k = static_cast<std::size_t>(vk);
  if (k > nv_ - 2) k = nv_ - 2;
  const double tv = vk - static_cast<double>(k);

  const auto wx = bspline_weights(tx);
  const auto wv = bspline_weights(tv);
  const std::size_t w = nv_ + 2;
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    long long jj = j - 1 + a;
    if (jj < 0) jj += n;
    if (jj >= n) jj -= n;
    // Coefficient index k - 1 + b lives at column k + b (ghost offset 1).
    const double* c = coef_.data() + static_cast<std::size_t>(jj) * w + k;
    const double s = wv[0] * c[0] + wv[1] * c[1] + wv[2] * c[2] + wv[3] * c[3];
    sum += wx[static_cast<std::size_t>(a)] * s;
  }
  return sum;
}

double interp_linear(const DensityField& field, double x, double v) {
  return LinearInterpolant(field)(x, v);
}

double interp_spline(const DensityField& field, double x, double v) {
  return SplineInterpolant(field)(x, v);
}

}  // namespace ddsl
