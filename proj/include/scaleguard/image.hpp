// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_IMAGE_HPP_
#define SCALEGUARD_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scaleguard {

// An owned 8-bit raster. Samples are row-major and channel-interleaved:
// sample (col, row, ch) lives at ((row * width) + col) * channels + ch.
//
// Pixel (col, row) is centered at continuous coordinate (col + 0.5, row + 0.5).
// Images have no mutation API; build the sample vector first and move it in.
class Image {
 public:
  // Throws InvalidArgument unless width, height >= 1, channels is 1 or 3 and
  // samples.size() == width * height * channels.
  Image(int width, int height, int channels, std::vector<std::uint8_t> samples);

  static Image filled(int width, int height, int channels, std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> samples() const { return samples_; }

  std::size_t index(int col, int row, int channel = 0) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(channel);
  }

  std::uint8_t at(int col, int row, int channel = 0) const {
    return samples_[index(col, row, channel)];
  }

  // Moves the sample buffer out, leaving the image empty. Used to derive a
  // modified copy: `auto buf = Image(src).release();`.
  std::vector<std::uint8_t> release() && { return std::move(samples_); }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Image& a, const Image& b) = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> samples_;
};

// A discrete pixel index that is in bounds for the extent it was built for.
class PixelCoord {
 public:
  // Throws InvalidArgument if (col, row) lies outside [0, width) x [0, height).
  PixelCoord(int col, int row, int width, int height);

  int col() const { return col_; }
  int row() const { return row_; }

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;

 private:
  int col_;
  int row_;
};

}  // namespace scaleguard

#endif  // SCALEGUARD_IMAGE_HPP_
