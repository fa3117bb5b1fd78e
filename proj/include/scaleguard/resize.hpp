// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_RESIZE_HPP_
#define SCALEGUARD_RESIZE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scaleguard/image.hpp"

namespace scaleguard {

// A raster extent, used both for resize targets and for source dimensions.
struct ScaleSpec {
  int width = 1;
  int height = 1;

  // Parses the "WxH" grammar, e.g. "299x299". Throws InvalidArgument.
  static ScaleSpec parse(std::string_view text);
  static ScaleSpec of(const Image& img) { return {img.width(), img.height()}; }

  std::string to_string() const;
  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

// Throws InvalidArgument unless both extents are >= 1.
void validate(const ScaleSpec& spec);

enum class ResizeMode {
  kVulnerableBilinear,   // four-neighbor bilinear, no antialiasing
  kAntialiasedBilinear,  // tent kernel widened by the shrink factor
  kMultiStep,            // repeated vulnerable passes of bounded shrink
};

struct ResizePolicy {
  ResizeMode mode = ResizeMode::kVulnerableBilinear;
  // Maximum per-axis shrink factor of one pass; MultiStep only.
  double step_shrink_limit = 2.0;

  static ResizePolicy vulnerable() { return {ResizeMode::kVulnerableBilinear, 2.0}; }
  static ResizePolicy antialiased() { return {ResizeMode::kAntialiasedBilinear, 2.0}; }
  static ResizePolicy multistep(double limit = 2.0) {
    return {ResizeMode::kMultiStep, limit};
  }

  // Accepts "vulnerable", "antialias" (or "antialiased") and "multistep".
  static ResizePolicy parse(std::string_view name);
  std::string name() const;
};

// Throws InvalidArgument if MultiStep has step_shrink_limit <= 1.
void validate(const ResizePolicy& policy);

// The (up to) four source pixels that feed one vulnerable output pixel.
// Indices are clamped into the raster; n_l == n_u marks a single column.
struct NeighborSet {
  int n_l = 0;
  int n_u = 0;
  int m_l = 0;
  int m_u = 0;
  double x = 0.0;
  double y = 0.0;
};

// Continuous source coordinate of the center of target index i:
// (i + 0.5) * source_extent / target_extent.
double map_coordinate(int i, int target_extent, int source_extent);

// floor/ceil of (coord - 0.5) on each axis, clamped to the raster.
NeighborSet neighbors(double x, double y, int source_width, int source_height);

// Per-channel bilinear interpolation at continuous (x, y) over the four
// neighbors. A collapsed axis (n_l == n_u) puts weight 1 on its single index.
std::vector<double> bilinear_sample(const Image& img, double x, double y);

// Exact one-dimensional vulnerable taps for target index i. The weights are
// the rationals lo_weight / denominator and hi_weight / denominator, which is
// how the vulnerable path stays bit-exact; lo == hi means one tap of weight 1.
struct VulnerableTaps {
  int lo = 0;
  int hi = 0;
  std::int64_t lo_weight = 1;
  std::int64_t hi_weight = 0;
  std::int64_t denominator = 1;
};

VulnerableTaps vulnerable_taps(int i, int target_extent, int source_extent);

// Resamples `img` to `spec`. All policies return an input copy when `spec`
// equals the source extent.
Image resize(const Image& img, const ScaleSpec& spec, const ResizePolicy& policy);

// Intermediate extents a MultiStep resize passes through; the last element is
// always `spec`. Empty when no resampling is needed.
std::vector<ScaleSpec> multistep_schedule(const ScaleSpec& source,
                                          const ScaleSpec& spec,
                                          double step_shrink_limit);

// Floating-point single-plane resampling without quantization. MultiStep
// chains unrounded passes here, so it is the linear map the quantized path
// approximates.
std::vector<double> resample_plane(std::span<const double> plane,
                                   const ScaleSpec& source,
                                   const ScaleSpec& spec,
                                   const ResizePolicy& policy);

// Weight each source pixel contributes to one output pixel.
class ContributionMap {
 public:
  ContributionMap(ScaleSpec source, std::vector<double> weights);

  const ScaleSpec& source() const { return source_; }
  std::span<const double> weights() const { return weights_; }
  double weight(int col, int row) const {
    return weights_[static_cast<std::size_t>(row) *
                        static_cast<std::size_t>(source_.width) +
                    static_cast<std::size_t>(col)];
  }

  // Number of source pixels with nonzero weight.
  std::size_t support() const;
  double max_weight() const;
  double total() const;

  // Gray rendering with the largest weight mapped to 255.
  Image render() const;

 private:
  ScaleSpec source_;
  std::vector<double> weights_;
};

// Weight field of output pixel `probe` when resizing a `source`-sized image to
// `spec`. Equal to what switching on one source pixel at a time and reading
// the probe pixel (before rounding) would measure.
ContributionMap contribution_map(const ScaleSpec& source, const ScaleSpec& spec,
                                 const PixelCoord& probe,
                                 const ResizePolicy& policy);

}  // namespace scaleguard

#endif  // SCALEGUARD_RESIZE_HPP_
