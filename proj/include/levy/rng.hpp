#pragma once

#include <cstdint>
#include <random>

namespace levy {

// splitmix64 finalizer; bijective on 64-bit words
std::uint64_t mix64(std::uint64_t z);

// Standard normal quantile (Beasley-Springer center, Moro tails), |err| < 4e-9.
// Pinned here instead of std::normal_distribution so that identical seeds give
// identical paths on every platform.
double inverse_normal_cdf(double p);

// Reproducible uniform stream addressed by (master seed, stream index).
// Distinct indices give statistically independent sequences; the engine is
// mt19937_64 whose output is pinned by the standard.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_raw() { return eng_(); }
  // in the open interval (0,1), 53-bit resolution, never 0 or 1
  double uniform01();
  double gaussian() { return inverse_normal_cdf(uniform01()); }
  // -ln(U)/rate; rate must be positive and finite
  double exponential(double rate);
  // exact Poisson(lambda) count: inversion below 10, transformed rejection above
  std::uint64_t poisson_count(double lambda);

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 eng_;
};

}  // namespace levy
