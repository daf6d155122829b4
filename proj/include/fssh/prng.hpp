#pragma once

#include <cstdint>

namespace fssh {

/// Counter-based deterministic generator built on the SplitMix64 finalizer.
/// Draw i from stream `seed` is mix(seed + (i+1) * GAMMA), so any draw can be
/// produced independently of the others and ensembles are reproducible across
/// platforms and implementations.
struct CounterRng {
  std::uint64_t seed = 0;

  static constexpr std::uint64_t GAMMA = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t word(std::uint64_t index) const { return mix(seed + (index + 1) * GAMMA); }

  /// uniform double in [0, 1), 53 mantissa bits
  double uniform01(std::uint64_t index) const { return double(word(index) >> 11) * 0x1.0p-53; }

  /// uniform double in [-amplitude, +amplitude]
  double uniform_symmetric(std::uint64_t index, double amplitude) const {
    return amplitude * (2.0 * uniform01(index) - 1.0);
  }
};

}  // namespace fssh
