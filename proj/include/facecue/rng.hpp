#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace facecue {

/// SplitMix64 finaliser (Steele, Lea & Flood). Used only to derive seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream identifiers so that different stages never share draws.
enum class StreamTag : std::uint64_t {
  Augmentation = 0x61756731,
  Forest = 0x66727374,
  Split = 0x73706c74,
  Synthetic = 0x73796e74,
};

/// Portable random source.
///
/// The engine is std::mt19937_64, whose output sequence the standard fixes.
/// Standard distributions are not portable across library vendors, so every
/// conversion to doubles and bounded integers is done here:
///   uniform01      (u >> 11) * 2^-53
///   below(n)       rejection sampling on the top of the 64-bit range
///   normal         Box-Muller on two uniform01 draws
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for item `index` of stage `tag` under a user seed.
  static Rng stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(tag));
    s = splitmix64(s ^ index);
    return Rng(s);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t u;
    do {
      u = next();
    } while (u >= limit);
    return u % n;
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace facecue
