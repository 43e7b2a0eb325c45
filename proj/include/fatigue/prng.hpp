#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fatigue/types.hpp"

namespace fatigue {

// Random-number plumbing shared by the bootstrap estimators and the synthetic
// generator. Everything here is deterministic given (seed, stream): engines
// are std::mt19937_64 (whose seeding and output are fixed by the standard) and
// all samplers are hand-rolled on top of its raw 64-bit output, so identical
// seeds give identical draws regardless of platform or standard library.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Engine for substream `stream` of the run keyed by `seed`. Substreams with
/// distinct ids are statistically independent and may be consumed in any
/// order (replicates, days) without affecting one another.
inline std::mt19937_64 make_substream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ stream;
  mixed = splitmix64(state);
  return std::mt19937_64{mixed};
}

/// Uniform draw strictly inside (0, 1): 53-bit mantissa, offset by half a step.
inline Scalar uniform01(std::mt19937_64& rng) {
  return (static_cast<Scalar>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection,
/// so indices are exactly uniform.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  unsigned __int128 product = static_cast<unsigned __int128>(rng()) * bound;
  std::uint64_t low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    while (low < threshold) {
      product = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

/// Standard normal via Box-Muller (cosine branch only, no cached second value).
inline Scalar normal01(std::mt19937_64& rng) {
  const Scalar u1 = uniform01(rng);
  const Scalar u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi_v<Scalar> * u2);
}

/// Poisson count by Knuth's product method; intended for modest means.
inline std::uint64_t poisson_count(std::mt19937_64& rng, Scalar mean) {
  if (!(mean >= 0)) throw std::invalid_argument("poisson_count: mean must be >= 0");
  if (mean == 0) return 0;
  const Scalar limit = std::exp(-mean);
  std::uint64_t count = 0;
  Scalar product = 1.0;
  do {
    ++count;
    product *= uniform01(rng);
  } while (product > limit);
  return count - 1;
}

}  // namespace fatigue
