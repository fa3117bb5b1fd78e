// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "scaleguard/errors.hpp"

namespace scaleguard {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};

// ---------------------------------------------------------------------------
// PNG (libpng). The setjmp frames below only hold trivially destructible
// locals; every C++ object they touch is owned by the caller.

enum class PngStatus { kOk, kCorrupt, kUnsupported };

struct PngReadState {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t pos = 0;
  char message[256] = {};
  // Filled by decode_png_into.
  std::vector<std::uint8_t>* samples = nullptr;
  int width = 0;
  int height = 0;
  int channels = 0;
  png_bytepp rows = nullptr;
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngReadState*>(png_get_error_ptr(png));
  if (state != nullptr) {
    std::snprintf(state->message, sizeof(state->message), "%s", msg);
  }
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->size - state->pos < count) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, state->data + state->pos, count);
  state->pos += count;
}

PngStatus decode_png_into(PngReadState* state) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state,
                                           png_error_handler,
                                           png_warning_handler);
  if (png == nullptr) {
    std::snprintf(state->message, sizeof(state->message),
                  "png_create_read_struct failed");
    return PngStatus::kCorrupt;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(state->message, sizeof(state->message),
                  "png_create_info_struct failed");
    return PngStatus::kCorrupt;
  }
  if (setjmp(png_jmpbuf(png))) {
    if (state->rows != nullptr) png_free(png, state->rows);
    state->rows = nullptr;
    png_destroy_read_struct(&png, &info, nullptr);
    return PngStatus::kCorrupt;
  }
  png_set_read_fn(png, state, png_read_from_memory);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  PngStatus status = PngStatus::kOk;
  if (bit_depth > 8) {
    std::snprintf(state->message, sizeof(state->message),
                  "16-bit PNG samples are not supported");
    status = PngStatus::kUnsupported;
  } else if ((color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
             png_get_valid(png, info, PNG_INFO_tRNS) != 0) {
    std::snprintf(state->message, sizeof(state->message),
                  "PNG with alpha channel is not supported");
    status = PngStatus::kUnsupported;
  }
  if (status != PngStatus::kOk) {
    png_destroy_read_struct(&png, &info, nullptr);
    return status;
  }

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  state->width = static_cast<int>(width);
  state->height = static_cast<int>(height);
  state->channels = channels;

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  state->samples->resize(row_bytes * height);
  state->rows = static_cast<png_bytepp>(
      png_malloc(png, sizeof(png_bytep) * static_cast<std::size_t>(height)));
  for (png_uint_32 y = 0; y < height; ++y) {
    state->rows[y] = state->samples->data() + row_bytes * y;
  }
  png_read_image(png, state->rows);
  png_read_end(png, nullptr);
  png_free(png, state->rows);
  state->rows = nullptr;
  png_destroy_read_struct(&png, &info, nullptr);
  return PngStatus::kOk;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> samples;
  PngReadState state;
  state.data = bytes.data();
  state.size = bytes.size();
  state.samples = &samples;
  switch (decode_png_into(&state)) {
    case PngStatus::kCorrupt:
      throw CorruptImage(std::string("corrupt PNG: ") + state.message);
    case PngStatus::kUnsupported:
      throw UnsupportedFormat(state.message);
    case PngStatus::kOk:
      break;
  }
  if (state.channels != 1 && state.channels != 3) {
    throw UnsupportedFormat("PNG decodes to " + std::to_string(state.channels) +
                            " channels");
  }
  return Image(state.width, state.height, state.channels, std::move(samples));
}

struct PngWriteState {
  std::vector<std::uint8_t>* out = nullptr;
  char message[256] = {};
};

void png_write_to_memory(png_structp png, png_bytep data, png_size_t count) {
  auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
  state->out->insert(state->out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

void png_write_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngWriteState*>(png_get_error_ptr(png));
  if (state != nullptr) {
    std::snprintf(state->message, sizeof(state->message), "%s", msg);
  }
  png_longjmp(png, 1);
}

bool encode_png_into(const Image* img, PngWriteState* state) {
  png_structp png = png_create_write_struct(
      PNG_LIBPNG_VER_STRING, state, png_write_error_handler, png_warning_handler);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, state, png_write_to_memory, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img->width()),
               static_cast<png_uint_32>(img->height()), 8,
               img->channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(img->width()) *
                             static_cast<std::size_t>(img->channels());
  const std::uint8_t* base = img->samples().data();
  for (int y = 0; y < img->height(); ++y) {
    // libpng does not modify rows on write.
    png_write_row(png, const_cast<png_bytep>(base + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

// ---------------------------------------------------------------------------
// Binary netpbm.

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Reads the next unsigned decimal header field, skipping whitespace and
  // '#' comments.
  long next_field() {
    skip_separators();
    if (pos_ >= bytes_.size()) throw CorruptImage("truncated PNM header");
    if (bytes_[pos_] < '0' || bytes_[pos_] > '9') {
      throw CorruptImage("malformed PNM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 24)) throw CorruptImage("PNM header value too large");
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw CorruptImage("truncated PNM header");
    }
    return pos_ + 1;
  }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  const int channels = bytes[1] == '6' ? 3 : 1;
  PnmHeaderReader reader(bytes);
  const long width = reader.next_field();
  const long height = reader.next_field();
  const long maxval = reader.next_field();
  if (width < 1 || height < 1) throw CorruptImage("PNM dimensions must be positive");
  if (maxval < 1) throw CorruptImage("PNM maxval must be positive");
  if (maxval > 255) throw UnsupportedFormat("16-bit PNM samples are not supported");
  const std::size_t offset = reader.raster_offset();
  const std::size_t needed = static_cast<std::size_t>(width) *
                             static_cast<std::size_t>(height) *
                             static_cast<std::size_t>(channels);
  if (bytes.size() - offset < needed) throw CorruptImage("truncated PNM raster");
  std::vector<std::uint8_t> samples(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                    bytes.begin() + static_cast<std::ptrdiff_t>(offset + needed));
  return Image(static_cast<int>(width), static_cast<int>(height), channels,
               std::move(samples));
}

std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '6' || bytes[1] == '5') return decode_pnm(bytes);
    if (bytes[1] >= '1' && bytes[1] <= '7') {
      throw UnsupportedFormat(std::string("netpbm variant P") +
                              static_cast<char>(bytes[1]) + " is not supported");
    }
  }
  if (bytes.size() >= 4 && std::equal(kPngSignature, kPngSignature + 4, bytes.begin())) {
    if (bytes.size() < sizeof(kPngSignature) ||
        !std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
      throw CorruptImage("truncated PNG signature");
    }
    return decode_png(bytes);
  }
  if (bytes.size() < 4) throw CorruptImage("file too short to hold an image header");
  throw UnsupportedFormat("unrecognized image format");
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out;
  PngWriteState state;
  state.out = &out;
  if (!encode_png_into(&img, &state)) {
    throw Error(std::string("PNG encoding failed: ") + state.message);
  }
  return out;
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") +
                             "\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.samples().begin(), img.samples().end());
  return out;
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  try {
    return decode_image(bytes);
  } catch (const CorruptImage& e) {
    throw CorruptImage(path.string() + ": " + e.what());
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(path.string() + ": " + e.what());
  }
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const std::string ext = lowercase_extension(path);
  std::vector<std::uint8_t> bytes;
  if (ext == ".png") {
    bytes = encode_png(img);
  } else if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
    bytes = encode_pnm(img);
  } else {
    throw UnsupportedFormat("unsupported output extension '" + ext + "' for " +
                            path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace scaleguard
