#pragma once

#include <cstdint>

namespace sherk {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Draw `i` is mix(key + (i + 1) * K2) with key = mix(seed ^ stream * K1), so any
/// element can be produced independently of the others and the sequence is
/// identical on every platform. Used for every random field in the library.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ (stream * 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform01(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  constexpr double symmetric(std::uint64_t counter) const noexcept {
    return 2.0 * uniform01(counter) - 1.0;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

}  // namespace sherk
