#pragma once

#include <cstdint>

namespace geosep {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937 so that
// seeded streams are identical on every platform; constants are the
// published ones. Gaussian draws use Box-Muller on top of the uniform
// stream (libm accuracy is the only platform-dependent part).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double next_double_open() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_gaussian();

  // Uniform integer in [0, n), n >= 1.
  int next_below(int n);

 private:
  std::uint64_t state_;
};

}  // namespace geosep
