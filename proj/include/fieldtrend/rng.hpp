#pragma once

#include <cstdint>

namespace fieldtrend {

// SplitMix64 (Steele, Lea & Flood 2014): 64-bit state advanced by the golden
// gamma 0x9E3779B97F4A7C15 and finalized with the MurmurHash3-style mixer.
// The seed is used as the initial state. All draws used by sampling and the
// synthetic generator are defined on top of next() so results are
// reproducible across platforms and implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound) by rejection; bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller (cosine branch only, two uniforms per draw).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace fieldtrend
