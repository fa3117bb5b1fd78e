// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/image.hpp"

#include <string>

#include "scaleguard/errors.hpp"

namespace scaleguard {

Image::Image(int width, int height, int channels,
             std::vector<std::uint8_t> samples)
    : width_(width),
      height_(height),
      channels_(channels),
      samples_(std::move(samples)) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("image must have 1 or 3 channels, got " +
                          std::to_string(channels));
  }
  const std::size_t expected = static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(channels);
  if (samples_.size() != expected) {
    throw InvalidArgument("sample buffer holds " +
                          std::to_string(samples_.size()) +
                          " values, expected " + std::to_string(expected));
  }
}

Image Image::filled(int width, int height, int channels, std::uint8_t value) {
  const std::size_t n = (width > 0 && height > 0 && channels > 0)
                            ? static_cast<std::size_t>(width) *
                                  static_cast<std::size_t>(height) *
                                  static_cast<std::size_t>(channels)
                            : 0;
  return Image(width, height, channels, std::vector<std::uint8_t>(n, value));
}

PixelCoord::PixelCoord(int col, int row, int width, int height)
    : col_(col), row_(row) {
  if (col < 0 || col >= width || row < 0 || row >= height) {
    throw InvalidArgument("pixel (" + std::to_string(col) + "," +
                          std::to_string(row) + ") outside " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace scaleguard
