// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_METRICS_HPP_
#define SCALEGUARD_METRICS_HPP_

#include "scaleguard/image.hpp"

namespace scaleguard {

struct SimilarityReport {
  bool exact = false;
  int max_abs_diff = 0;
  double mse = 0.0;
  // Peak 255; +infinity when the images are identical.
  double psnr = 0.0;
  // Pearson correlation of the flattened samples, in [-1, 1].
  double ncc = 0.0;
};

// Throws DimensionMismatch unless a and b share width, height and channels.
//
// NCC is 1 when both images are constant and equal and 0 when only one, or
// both but unequal, are constant.
SimilarityReport compare(const Image& a, const Image& b);

}  // namespace scaleguard

#endif  // SCALEGUARD_METRICS_HPP_
