#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ddsl {

// Brownian increments delta[k][n] = beta_k(t_{n+1}) - beta_k(t_n) on a uniform time grid.
class BrownianIncrements {
 public:
  BrownianIncrements() = default;
  BrownianIncrements(std::size_t K, std::size_t N, double tau, std::uint64_t seed,
                     std::vector<double> table);

  std::size_t components() const { return K_; }
  std::size_t steps() const { return N_; }
  double tau() const { return tau_; }
  std::uint64_t seed() const { return seed_; }

  // Increment of component k over step n (0-based: n covers [t_n, t_{n+1}]).
  double operator()(std::size_t k, std::size_t n) const { return table_[k * N_ + n]; }
  // All K components of step n.
  std::vector<double> step(std::size_t n) const;
  std::span<const double> component(std::size_t k) const {
    return std::span<const double>(table_).subspan(k * N_, N_);
  }
  std::span<const double> table() const { return table_; }

  // Order-sensitive FNV-1a over the raw bits; used to assert path coupling.
  std::uint64_t checksum() const;

 private:
  std::size_t K_ = 0;
  std::size_t N_ = 0;
  double tau_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> table_;
};

// i.i.d. N(0, tau) entries, a deterministic function of (K, N, tau, seed).
BrownianIncrements sample_path(std::size_t K, std::size_t N, double tau, std::uint64_t seed);

// Sums `factor` consecutive fine increments into one coarse increment.
BrownianIncrements coarsen(const BrownianIncrements& inc, std::size_t factor);

// Entrywise clamp into [-bound, bound].
BrownianIncrements truncate(const BrownianIncrements& inc, double bound);

}  // namespace ddsl
