#pragma once

#include <cstdint>
#include <random>

namespace love {

/// Portable seeded generator.
///
/// Engine: std::mt19937_64 (output sequence fixed by the C++ standard).
/// Every derived draw is defined in terms of raw 64-bit outputs so results
/// do not depend on the standard library's distribution implementations;
/// docs/rng.md lists the exact rules and test vectors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Top 53 bits scaled to [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// lo + (hi - lo) * uniform01().
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Most significant bit of one output.
  bool coin() { return (next_u64() >> 63) != 0; }

  /// Unbiased integer in [0, n) by rejection of the low residue band.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for the `index`-th independent sub-stream of `seed`:
/// splitmix64(seed + 0x9E3779B97F4A7C15 * (index + 1)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace love
