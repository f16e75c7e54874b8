#pragma once

#include <cstdint>
#include <random>

namespace rocoin {

// All stochastic steps go through these helpers instead of <random>
// distributions: mt19937_64 output is pinned by the standard but the
// distributions are not, and identical seeds must give byte-identical
// results on every platform.

/// SplitMix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of the stream identified by `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1).
inline double next_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double next_uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * next_unit(rng);
}

/// Uniform integer in [0, n). n must be positive.
inline std::size_t next_index(Rng& rng, std::size_t n) {
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % n);
}

}  // namespace rocoin
