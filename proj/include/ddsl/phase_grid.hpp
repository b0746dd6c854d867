#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ddsl {

// Uniform mesh over T_L x [-U, U]. Counts are stored as integers so the
// half-width never drifts off the dv lattice when the domain grows.
class PhaseGrid {
 public:
  PhaseGrid() = default;
  PhaseGrid(double L, double dx, double dv, std::size_t nx, std::size_t half_count);

  double L() const { return L_; }
  double dx() const { return dx_; }
  double dv() const { return dv_; }
  double U() const { return static_cast<double>(half_) * dv_; }

  std::size_t nx() const { return nx_; }
  std::size_t nv() const { return 2 * half_ + 1; }
  std::size_t size() const { return nx() * nv(); }
  // U / dv
  std::size_t half_count() const { return half_; }

  double x(std::size_t j) const { return static_cast<double>(j) * dx_; }
  double v(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(half_)) * dv_;
  }

  // Same mesh with the half-width enlarged by `extra` velocity cells.
  PhaseGrid widened(std::size_t extra) const;

  bool same_mesh(const PhaseGrid& other) const;

 private:
  double L_ = 1.0;
  double dx_ = 1.0;
  double dv_ = 1.0;
  std::size_t nx_ = 1;
  std::size_t half_ = 1;
};

// Returns round(num/den) if it is a nonnegative integer within 1e-9 relative,
// otherwise throws std::invalid_argument naming `what`.
std::size_t aligned_ratio(double num, double den, const std::string& what);

PhaseGrid make_grid(double L, double dx, double dv, double U);

// Nodal values, row-major with the position index outermost.
class DensityField {
 public:
  DensityField() = default;
  explicit DensityField(PhaseGrid grid);
  DensityField(PhaseGrid grid, std::vector<double> values);

  const PhaseGrid& grid() const { return grid_; }

  double& operator()(std::size_t j, std::size_t k) { return values_[j * grid_.nv() + k]; }
  double operator()(std::size_t j, std::size_t k) const { return values_[j * grid_.nv() + k]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> row(std::size_t j) const {
    return std::span<const double>(values_).subspan(j * grid_.nv(), grid_.nv());
  }

  double min_value() const;
  bool all_finite() const;

 private:
  PhaseGrid grid_;
  std::vector<double> values_;
};

// Pads `extra` zero velocity rows on each side; interior values are copied bitwise.
DensityField grow_grid(const DensityField& field, std::size_t extra);
DensityField grow_grid(const DensityField& field, double Xi);

struct HalfwidthUpdate {
  double U = 0.0;
  bool grew = false;
};

// Growth test on the boundary band |v| in [U - Xi, U]. Values <= epsilon0
// everywhere in the band keep U; otherwise U grows by Xi. A band that covers
// the whole velocity range (Xi >= U) always grows. Xi == 0 never grows.
HalfwidthUpdate update_halfwidth(const DensityField& field, std::size_t xi_cells, double epsilon0);
HalfwidthUpdate update_halfwidth(const DensityField& field, double Xi, double epsilon0);

struct GrowthEvent {
  std::size_t step = 0;
  double Xi = 0.0;
};

struct DomainState {
  double U = 0.0;
  double epsilon0 = 0.0;
  std::vector<GrowthEvent> growth_log;
};

// Snapshot text format:
//   # vlasov-snapshot v1 L=<f> dx=<f> dv=<f> U=<f> t=<f>
//   j k value          (nx*nv lines, j outer)
void write_snapshot(std::ostream& out, const DensityField& field, double t);
void write_snapshot(const std::string& path, const DensityField& field, double t);

struct Snapshot {
  DensityField field;
  double t = 0.0;
};
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::string& path);

}  // namespace ddsl
