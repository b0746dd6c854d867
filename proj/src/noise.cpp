#include "ddsl/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace ddsl {

BrownianIncrements::BrownianIncrements(std::size_t K, std::size_t N, double tau,
                                       std::uint64_t seed, std::vector<double> table)
    : K_(K), N_(N), tau_(tau), seed_(seed), table_(std::move(table)) {
  if (table_.size() != K_ * N_) {
    throw std::invalid_argument("BrownianIncrements: table size must be K*N");
  }
}

std::vector<double> BrownianIncrements::step(std::size_t n) const {
  std::vector<double> out(K_);
  for (std::size_t k = 0; k < K_; ++k) out[k] = (*this)(k, n);
  return out;
}

std::uint64_t BrownianIncrements::checksum() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(K_);
  mix(N_);
  mix(std::bit_cast<std::uint64_t>(tau_));
  for (double d : table_) mix(std::bit_cast<std::uint64_t>(d));
  return h;
}

BrownianIncrements sample_path(std::size_t K, std::size_t N, double tau, std::uint64_t seed) {
  if (K == 0 || N == 0 || !(tau > 0.0)) {
    throw std::invalid_argument("sample_path: need K >= 1, N >= 1, tau > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(tau));
  std::vector<double> table(K * N);
  // Step-major draw order: the first n steps of a path do not depend on N.
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t k = 0; k < K; ++k) table[k * N + n] = normal(rng);
  }
  return BrownianIncrements(K, N, tau, seed, std::move(table));
}

BrownianIncrements coarsen(const BrownianIncrements& inc, std::size_t factor) {
  if (factor == 0 || inc.steps() % factor != 0) {
    throw std::invalid_argument("coarsen: factor " + std::to_string(factor) +
                                " does not divide N = " + std::to_string(inc.steps()));
  }
  if (factor == 1) return inc;
  // Power-of-two factors go through repeated pairwise sums, which makes
  // coarsen(coarsen(x, 2), 2) and coarsen(x, 4) bit-identical.
  if (std::has_single_bit(factor) && factor > 2) {
    return coarsen(coarsen(inc, 2), factor / 2);
  }
  const std::size_t K = inc.components();
  const std::size_t Nc = inc.steps() / factor;
  std::vector<double> table(K * Nc, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t n = 0; n < Nc; ++n) {
      double sum = 0.0;
      for (std::size_t i = 0; i < factor; ++i) sum += inc(k, n * factor + i);
      table[k * Nc + n] = sum;
    }
  }
  return BrownianIncrements(K, Nc, inc.tau() * static_cast<double>(factor), inc.seed(),
                            std::move(table));
}

BrownianIncrements truncate(const BrownianIncrements& inc, double bound) {
  if (!(bound >= 0.0)) throw std::invalid_argument("truncate: bound must be >= 0");
  std::vector<double> table(inc.table().begin(), inc.table().end());
  for (double& d : table) d = std::clamp(d, -bound, bound);
  return BrownianIncrements(inc.components(), inc.steps(), inc.tau(), inc.seed(),
                            std::move(table));
}

}  // namespace ddsl
