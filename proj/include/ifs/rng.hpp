#pragma once

#include <cstdint>

namespace ifs {

// SplitMix64. The exact state transition, so streams reproduce bit-exactly
// across implementations:
//   state += 0x9E3779B97F4A7C15
//   z = state; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
//   z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) using the top 53 bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1} by rejection-free scaling (n small).
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next_double() * n) % n;
  }
};

}  // namespace ifs
