#include "levy/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace levy {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed),
      index_(stream_index),
      eng_(mix64(master_seed + kGolden * (stream_index + 1))) {}

double RngStream::uniform01() {
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("exponential: rate must be positive and finite");
  return -std::log(uniform01()) / rate;
}

double inverse_normal_cdf(double p) {
  static const double a[4] = {2.50662823884, -18.61500062529, 41.39119773534,
                              -25.44106049637};
  static const double b[4] = {-8.47351093090, 23.08336743743, -21.06224101826,
                              3.13082909833};
  static const double c[9] = {0.3374754822726147, 0.9761690190917186,
                              0.1607979714918209, 0.0276438810333863,
                              0.0038405729373609, 0.0003951896511919,
                              0.0000321767881768, 0.0000002888167364,
                              0.0000003960315187};
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
  const double y = p - 0.5;
  if (std::abs(y) < 0.42) {
    const double r = y * y;
    return y * (((a[3] * r + a[2]) * r + a[1]) * r + a[0]) /
           ((((b[3] * r + b[2]) * r + b[1]) * r + b[0]) * r + 1.0);
  }
  double r = (y > 0.0) ? 1.0 - p : p;
  r = std::log(-std::log(r));
  double x = c[8];
  for (int i = 7; i >= 0; --i) x = x * r + c[i];
  return (y > 0.0) ? x : -x;
}

std::uint64_t RngStream::poisson_count(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson_count: lambda must be finite and >= 0");
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) {
    // sequential inversion; safe from underflow for small lambda
    const double u = uniform01();
    double p = std::exp(-lambda);
    double cum = p;
    std::uint64_t k = 0;
    const std::uint64_t cap = static_cast<std::uint64_t>(10.0 * lambda) + 100;
    while (u > cum && k < cap) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cum += p;
    }
    return k;
  }
  // Hormann's transformed-rejection sampler with squeeze (PTRS)
  const double smu = std::sqrt(lambda);
  const double log_lambda = std::log(lambda);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01() - 0.5;
    const double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + kf * log_lambda - std::lgamma(kf + 1.0))
      return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace levy
