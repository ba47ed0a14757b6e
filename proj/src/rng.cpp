#include "geosep/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geosep {

double SplitMix64::next_gaussian() {
  // Box-Muller, cosine branch only; the uniform stream stays portable.
  double u1 = next_double_open();
  double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int SplitMix64::next_below(int n) {
  if (n < 1) throw std::invalid_argument("next_below: n must be >= 1");
  // Rejection-free modulo is biased; rejection keeps the stream exact.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return static_cast<int>(v % bound);
}

}  // namespace geosep
