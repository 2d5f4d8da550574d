#pragma once

#include <cstdint>

namespace tlasso {

// Counter-based stream: every draw is a hash of (seed, counter), so the
// sequence depends only on the seed and the number of values consumed,
// never on scheduling. Distinct raw seeds are decorrelated by a mixing
// round at construction.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(mix(seed ^ kSalt)) {}

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Box-Muller transform; pairs are cached.
  double normal();

  std::uint64_t next() { return mix(seed_ + (++counter_) * kGamma); }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSalt = 0x5CA1AB1E0DDBA11ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tlasso
