#pragma once

#include <cstdint>
#include <random>

namespace kadic {

/// All randomness flows through mt19937_64, whose output sequence is fixed by
/// the standard. The std distributions are not, so the two draws we need are
/// spelled out here to keep campaigns reproducible across standard libraries.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer; derives independent per-trial seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % n;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1p-53; }

}  // namespace kadic
