#pragma once

#include <array>
#include <cstdint>

namespace shootout {

/// SplitMix64 finaliser (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman, Vigna), period 2^256 - 1.
///
/// Seeding follows the reference recommendation: the four state words are
/// consecutive outputs of a SplitMix64 generator started at `seed`.
class Xoshiro256 {
 public:
  explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      sm += 0x9E3779B97F4A7C15ULL;
      word = mix64(sm);
    }
  }

  constexpr std::uint64_t operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double probability) noexcept { return uniform() < probability; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Generator for one Monte Carlo trial. Trial streams depend only on
/// (seed, trial_index), so trials can run in any order or in parallel:
///   Xoshiro256(mix64(seed ^ mix64(trial_index)))
inline Xoshiro256 trial_stream(std::uint64_t seed, std::uint64_t trial_index) noexcept {
  return Xoshiro256(mix64(seed ^ mix64(trial_index)));
}

}  // namespace shootout
