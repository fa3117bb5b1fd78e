// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_IMAGE_IO_HPP_
#define SCALEGUARD_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "scaleguard/image.hpp"

namespace scaleguard {

// Reads an 8-bit PNG (gray, RGB or palette) or a binary PPM (P6) / PGM (P5).
// The format is chosen from the file's magic bytes, not its extension.
// Samples are returned exactly as stored: no gamma, no color management.
//
// Errors, each distinct:
//   IoError            the file cannot be opened or read
//   UnsupportedFormat  unknown magic, 16-bit samples, alpha channel, ASCII PNM
//   CorruptImage       malformed or truncated header or payload
Image load_image(const std::filesystem::path& path);

// Writes `img` losslessly. The extension picks the container: ".png", or
// ".ppm" / ".pgm" / ".pnm" for binary netpbm (P6 for RGB, P5 for gray).
// Throws UnsupportedFormat for other extensions and IoError on write failure.
void save_image(const Image& img, const std::filesystem::path& path);

// In-memory codecs behind load_image/save_image.
Image decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Image& img);
std::vector<std::uint8_t> encode_pnm(const Image& img);

}  // namespace scaleguard

#endif  // SCALEGUARD_IMAGE_IO_HPP_
