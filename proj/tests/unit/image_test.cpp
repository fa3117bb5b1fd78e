// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <zlib.h>

#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "scaleguard/errors.hpp"
#include "scaleguard/image.hpp"
#include "scaleguard/image_io.hpp"
#include "test_support.hpp"

namespace scaleguard {
namespace {

using testing::random_image;
using testing::TempDir;
using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

Bytes from_string(const std::string& s) { return Bytes(s.begin(), s.end()); }

void put_be32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_chunk(Bytes& out, const char* type, const Bytes& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  Bytes body(type, type + 4);
  body.insert(body.end(), data.begin(), data.end());
  out.insert(out.end(), body.begin(), body.end());
  put_be32(out, static_cast<std::uint32_t>(crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

// Hand-assembled PNG with unfiltered rows, independent of libpng.
Bytes make_png(int width, int height, int bit_depth, int color_type, const Bytes& raw_rows,
               const Bytes& extra_chunk = {}, const char* extra_type = nullptr) {
  Bytes out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  Bytes ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(width));
  put_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.insert(ihdr.end(), {static_cast<std::uint8_t>(bit_depth),
                           static_cast<std::uint8_t>(color_type), 0, 0, 0});
  put_chunk(out, "IHDR", ihdr);
  if (extra_type != nullptr) put_chunk(out, extra_type, extra_chunk);
  uLongf size = compressBound(static_cast<uLong>(raw_rows.size()));
  Bytes idat(size);
  compress(idat.data(), &size, raw_rows.data(), static_cast<uLong>(raw_rows.size()));
  idat.resize(size);
  put_chunk(out, "IDAT", idat);
  put_chunk(out, "IEND", {});
  return out;
}

TEST(Image, ValidatesShape) {
  EXPECT_THROW(Image(0, 1, 1, {}), InvalidArgument);
  EXPECT_THROW(Image(1, 0, 1, {}), InvalidArgument);
  EXPECT_THROW(Image(1, 1, 2, {0, 0}), InvalidArgument);
  EXPECT_THROW(Image(2, 2, 3, Bytes(11)), InvalidArgument);
  EXPECT_NO_THROW(Image(2, 2, 3, Bytes(12)));
}

TEST(Image, RowMajorChannelInterleaved) {
  const Image img(3, 2, 3, [] {
    Bytes b(18);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(i);
    return b;
  }());
  EXPECT_EQ(img.at(0, 0, 0), 0);
  EXPECT_EQ(img.at(1, 0, 2), 5);
  EXPECT_EQ(img.at(0, 1, 0), 9);
  EXPECT_EQ(img.at(2, 1, 2), 17);
}

TEST(PixelCoord, RejectsOutOfBounds) {
  EXPECT_NO_THROW(PixelCoord(0, 0, 1, 1));
  EXPECT_NO_THROW(PixelCoord(4, 2, 5, 3));
  EXPECT_THROW(PixelCoord(5, 0, 5, 3), InvalidArgument);
  EXPECT_THROW(PixelCoord(0, 3, 5, 3), InvalidArgument);
  EXPECT_THROW(PixelCoord(-1, 0, 5, 3), InvalidArgument);
}

TEST(ImageIo, DecodesTwoByTwoPpm) {
  Bytes ppm = from_string("P6\n2 2\n255\n");
  const Bytes body = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
  ppm.insert(ppm.end(), body.begin(), body.end());
  const Image img = decode_image(ppm);
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.channels(), 3);
  EXPECT_EQ(Bytes(img.samples().begin(), img.samples().end()), body);
}

TEST(ImageIo, PnmHeaderComments) {
  Bytes pgm = from_string("P5 # gray\n# another\n3 1 # size\n255\n");
  pgm.insert(pgm.end(), {7, 8, 9});
  const Image img = decode_image(pgm);
  EXPECT_EQ(img.channels(), 1);
  EXPECT_EQ(img.at(2, 0), 9);
}

TEST(ImageIo, GrayPgmIsSingleByteBody) {
  TempDir dir("io");
  save_image(Image::filled(1, 1, 1, 128), dir / "one.pgm");
  const Bytes file = read_file(dir / "one.pgm");
  ASSERT_FALSE(file.empty());
  EXPECT_EQ(file.back(), 0x80);
  EXPECT_EQ(file, [] {
    Bytes b = from_string("P5\n1 1\n255\n");
    b.push_back(0x80);
    return b;
  }());
}

TEST(ImageIo, RoundTripRandom17x13) {
  TempDir dir("io");
  Rng rng(17);
  for (int channels : {1, 3}) {
    const Image img = random_image(rng, 17, 13, channels);
    for (const char* name : {"a.png", "a.ppm", "a.pgm", "a.pnm"}) {
      save_image(img, dir / name);
      EXPECT_EQ(load_image(dir / name), img) << name << " channels " << channels;
    }
  }
}

TEST(ImageIo, RoundTripProperty) {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Image img = random_image(rng, uniform_int(rng, 1, 40), uniform_int(rng, 1, 40),
                                   uniform_int(rng, 0, 1) == 0 ? 1 : 3);
    EXPECT_EQ(decode_image(encode_png(img)), img);
    EXPECT_EQ(decode_image(encode_pnm(img)), img);
  }
}

TEST(ImageIo, DecodesHandBuiltPng) {
  // Two rows of RGB, filter byte 0.
  const Bytes raw = {0, 1, 2, 3, 4, 5, 6, 0, 7, 8, 9, 10, 11, 12};
  const Image img = decode_image(make_png(2, 2, 8, 2, raw));
  EXPECT_EQ(img.channels(), 3);
  EXPECT_EQ(Bytes(img.samples().begin(), img.samples().end()),
            Bytes({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
}

TEST(ImageIo, ExpandsPaletteAndLowBitGray) {
  const Bytes plte = {10, 20, 30, 40, 50, 60};
  const Image pal = decode_image(make_png(2, 1, 8, 3, {0, 1, 0}, plte, "PLTE"));
  EXPECT_EQ(pal.channels(), 3);
  EXPECT_EQ(Bytes(pal.samples().begin(), pal.samples().end()),
            Bytes({40, 50, 60, 10, 20, 30}));

  // 1-bit gray: bits 1,0 scale to 255,0.
  const Image bits = decode_image(make_png(2, 1, 1, 0, {0, 0x80}));
  EXPECT_EQ(bits.channels(), 1);
  EXPECT_EQ(bits.at(0, 0), 255);
  EXPECT_EQ(bits.at(1, 0), 0);
}

TEST(ImageIo, RejectsSixteenBitAndAlpha) {
  EXPECT_THROW(decode_image(make_png(1, 1, 16, 0, {0, 1, 2})), UnsupportedFormat);
  EXPECT_THROW(decode_image(make_png(1, 1, 8, 6, {0, 1, 2, 3, 4})), UnsupportedFormat);
  EXPECT_THROW(decode_image(make_png(1, 1, 8, 4, {0, 1, 2})), UnsupportedFormat);
  EXPECT_THROW(decode_image(make_png(1, 1, 8, 0, {0, 1}, {0, 1}, "tRNS")), UnsupportedFormat);
  Bytes wide = from_string("P5\n1 1\n65535\n");
  wide.insert(wide.end(), {0, 1});
  EXPECT_THROW(decode_image(wide), UnsupportedFormat);
}

TEST(ImageIo, ErrorsAreDistinct) {
  TempDir dir("io");
  EXPECT_THROW(load_image(dir / "missing.png"), IoError);
  EXPECT_THROW(decode_image(from_string("GIF89a......")), UnsupportedFormat);
  EXPECT_THROW(decode_image(from_string("P3\n1 1\n255\n0 0 0\n")), UnsupportedFormat);

  // Truncated files.
  const Bytes png = encode_png(Image::filled(8, 8, 3, 77));
  EXPECT_THROW(decode_image(Bytes(png.begin(), png.begin() + 5)), CorruptImage);
  EXPECT_THROW(decode_image(Bytes(png.begin(), png.begin() + 30)), CorruptImage);
  EXPECT_THROW(decode_image(Bytes(png.begin(), png.end() - 20)), CorruptImage);
  EXPECT_THROW(decode_image(from_string("P6")), CorruptImage);
  EXPECT_THROW(decode_image(from_string("P6\n2 2\n255\n\x01\x02")), CorruptImage);
  EXPECT_THROW(decode_image(from_string("P6\n2 x\n255\n")), CorruptImage);
}

TEST(ImageIo, SaveErrors) {
  TempDir dir("io");
  const Image img = Image::filled(2, 2, 1, 0);
  EXPECT_THROW(save_image(img, dir / "a.jpg"), UnsupportedFormat);
  EXPECT_THROW(save_image(img, dir / "no" / "such" / "dir.png"), IoError);
  EXPECT_THROW(save_image(img, dir / "no" / "such" / "dir.pgm"), IoError);
}

}  // namespace
}  // namespace scaleguard
