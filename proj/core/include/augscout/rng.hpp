#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace augscout {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-mode seed derivation: mixes a master seed with an arbitrary number
/// of indices. Same inputs give the same seed on every platform.
inline std::uint64_t derive_seed(std::uint64_t master) { return splitmix64(master); }

template <typename... Ix>
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Ix... rest) {
  return derive_seed(splitmix64(master ^ (index + 0x517cc1b727220a95ULL)), rest...);
}

/// Seeded random source with hand-rolled distributions. The mt19937_64 output
/// sequence is pinned by the standard, and the distributions below avoid
/// std::uniform_*_distribution so draws are identical across toolchains.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi] inclusive.
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Box-Muller; consumes two draws per pair, caches the second.
  double normal(double mean, double stddev) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + stddev * cached_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return mean + stddev * r * std::cos(theta);
  }

private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace augscout
