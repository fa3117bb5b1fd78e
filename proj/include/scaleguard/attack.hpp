// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_ATTACK_HPP_
#define SCALEGUARD_ATTACK_HPP_

#include <cstddef>
#include <vector>

#include "scaleguard/image.hpp"
#include "scaleguard/resize.hpp"

namespace scaleguard {

// One image to hide and the scale at which it should appear.
struct Embed {
  Image small;
  ScaleSpec at;
};

// A carrier plus the images to hide in it, applied in order.
struct EmbedPlan {
  Image carrier;
  std::vector<Embed> embeds;
};

// Throws PlanError when an embed's size differs from its scale, its scale is
// not strictly smaller than the carrier on both axes, or its channel count
// differs from the carrier's.
void validate(const EmbedPlan& plan);

struct EmbedReport {
  // Distinct carrier positions written by each embed.
  std::vector<std::size_t> pixels_written;
  // Positions written by more than one target pixel of the same embed. These
  // appear only when an axis shrinks by less than 2x and break exact reveal.
  std::vector<std::size_t> self_overlaps;
  // Carrier positions written by two or more embeds (row * width + col),
  // ascending. Later embeds win.
  std::vector<std::size_t> collision_positions;
  std::size_t collisions = 0;
  // Written positions over carrier pixel count, in [0, 1].
  double fraction_perturbed = 0.0;
};

struct AttackResult {
  Image combined;
  EmbedReport report;
};

// Copies each small image's pixels onto the carrier positions a vulnerable
// bilinear resize to its scale reads, so that
//   resize(combined, at, vulnerable) == small
// for the last embed, and for earlier embeds away from collisions.
AttackResult generate_attack(const EmbedPlan& plan);

// 255 at every carrier position generate_attack writes, 0 elsewhere.
Image perturbation_mask(const EmbedPlan& plan);

}  // namespace scaleguard

#endif  // SCALEGUARD_ATTACK_HPP_
