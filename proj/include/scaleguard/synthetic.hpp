// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_SYNTHETIC_HPP_
#define SCALEGUARD_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "scaleguard/image.hpp"

namespace scaleguard {

// Procedural stand-in for a photograph: a lit gradient, multi-octave value
// noise with a roughly 1/f spectrum, a few dozen soft-edged shapes and mild
// sensor noise. Deterministic in `seed`.
Image synthesize_scene(std::uint64_t seed, int width, int height, int channels = 3);

// Writes `count` scenes named scene_0000.png, ... into `dir` (created if
// needed) with sizes drawn from [400, 640] x [300, 480]. Returns the paths.
std::vector<std::filesystem::path> write_synthetic_corpus(
    const std::filesystem::path& dir, int count, std::uint64_t seed);

}  // namespace scaleguard

#endif  // SCALEGUARD_SYNTHETIC_HPP_
