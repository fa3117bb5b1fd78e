// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_RANDOM_HPP_
#define SCALEGUARD_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace scaleguard {

// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not. These draws are portable so that a seed reproduces
// the same corpus and pairing on every toolchain.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound) by rejection; bound must be >= 1.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi_inclusive) {
  return lo + static_cast<int>(uniform_below(
                  rng, static_cast<std::uint64_t>(hi_inclusive - lo) + 1));
}

}  // namespace scaleguard

#endif  // SCALEGUARD_RANDOM_HPP_
