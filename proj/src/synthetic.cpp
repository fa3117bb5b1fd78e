// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "scaleguard/errors.hpp"
#include "scaleguard/image_io.hpp"
#include "scaleguard/random.hpp"

namespace scaleguard {
namespace {

using Color = std::array<double, 3>;

Color random_color(Rng& rng) {
  return {uniform_real(rng, 10, 245), uniform_real(rng, 10, 245),
          uniform_real(rng, 10, 245)};
}

// Smoothly interpolated lattice noise summed over octaves, amplitude roughly
// proportional to cell size. Output has zero mean and unit-ish range.
std::vector<double> fractal_noise(Rng& rng, int width, int height) {
  std::vector<double> field(static_cast<std::size_t>(width) * height, 0.0);
  double norm = 0.0;
  for (int cell = 128; cell >= 2; cell /= 2) {
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
    for (double& g : grid) g = uniform_real(rng, -1.0, 1.0);
    const double amplitude = std::pow(static_cast<double>(cell), 0.9);
    norm += amplitude;
    for (int y = 0; y < height; ++y) {
      const double fy = static_cast<double>(y) / cell;
      const int gy = static_cast<int>(fy);
      double ty = fy - gy;
      ty = ty * ty * (3 - 2 * ty);
      for (int x = 0; x < width; ++x) {
        const double fx = static_cast<double>(x) / cell;
        const int gx = static_cast<int>(fx);
        double tx = fx - gx;
        tx = tx * tx * (3 - 2 * tx);
        auto g = [&](int cx, int cy) {
          return grid[static_cast<std::size_t>(cy) * gw + static_cast<std::size_t>(cx)];
        };
        const double top = g(gx, gy) * (1 - tx) + g(gx + 1, gy) * tx;
        const double bottom = g(gx, gy + 1) * (1 - tx) + g(gx + 1, gy + 1) * tx;
        field[static_cast<std::size_t>(y) * width + x] +=
            amplitude * (top * (1 - ty) + bottom * ty);
      }
    }
  }
  for (double& v : field) v /= norm;
  return field;
}

struct Shape {
  bool ellipse;
  double cx, cy, a, b, cos_t, sin_t;
  Color color;
  double texture;  // how strongly the shared noise modulates the fill
};

// Approximate signed distance in pixels; negative inside.
double signed_distance(const Shape& s, double x, double y) {
  const double dx = x - s.cx;
  const double dy = y - s.cy;
  const double u = dx * s.cos_t + dy * s.sin_t;
  const double v = -dx * s.sin_t + dy * s.cos_t;
  if (s.ellipse) {
    const double r = std::sqrt((u / s.a) * (u / s.a) + (v / s.b) * (v / s.b));
    return (r - 1.0) * std::min(s.a, s.b);
  }
  return std::max(std::abs(u) - s.a, std::abs(v) - s.b);
}

}  // namespace

Image synthesize_scene(std::uint64_t seed, int width, int height, int channels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw InvalidArgument("invalid synthetic scene geometry");
  }
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(width) * height;

  const Color sky = random_color(rng);
  const Color ground = random_color(rng);
  const double horizon = uniform_real(rng, 0.2, 0.8) * height;
  const double blend = uniform_real(rng, 0.05, 0.4) * height;

  const std::vector<double> luma_noise = fractal_noise(rng, width, height);
  std::array<std::vector<double>, 3> tint_noise;
  for (auto& t : tint_noise) t = fractal_noise(rng, width, height);
  const double texture_gain = uniform_real(rng, 40.0, 110.0);

  std::vector<Color> canvas(n);
  for (int y = 0; y < height; ++y) {
    const double t = 1.0 / (1.0 + std::exp(-(y - horizon) / blend));
    for (int x = 0; x < width; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * width + x;
      for (int c = 0; c < 3; ++c) {
        canvas[k][static_cast<std::size_t>(c)] =
            sky[c] * (1 - t) + ground[c] * t + texture_gain * luma_noise[k] +
            0.3 * texture_gain * tint_noise[static_cast<std::size_t>(c)][k];
      }
    }
  }

  const int shape_count = uniform_int(rng, 8, 30);
  const double extent = std::min(width, height);
  for (int s = 0; s < shape_count; ++s) {
    const double angle = uniform_real(rng, 0.0, std::numbers::pi);
    Shape shape{uniform_unit(rng) < 0.6,
                uniform_real(rng, 0, width),
                uniform_real(rng, 0, height),
                uniform_real(rng, 0.02, 0.25) * extent,
                uniform_real(rng, 0.02, 0.25) * extent,
                std::cos(angle),
                std::sin(angle),
                random_color(rng),
                uniform_real(rng, 0.0, 1.0)};
    const double reach = std::max(shape.a, shape.b) + 2.0;
    const int x0 = std::max(0, static_cast<int>(shape.cx - reach));
    const int x1 = std::min(width - 1, static_cast<int>(shape.cx + reach));
    const int y0 = std::max(0, static_cast<int>(shape.cy - reach));
    const int y1 = std::min(height - 1, static_cast<int>(shape.cy + reach));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double d = signed_distance(shape, x + 0.5, y + 0.5);
        const double coverage = std::clamp(0.5 - d, 0.0, 1.0);
        if (coverage <= 0.0) continue;
        const std::size_t k = static_cast<std::size_t>(y) * width + x;
        for (std::size_t c = 0; c < 3; ++c) {
          const double fill =
              shape.color[c] + shape.texture * texture_gain * luma_noise[k];
          canvas[k][c] = canvas[k][c] * (1 - coverage) + fill * coverage;
        }
      }
    }
  }

  std::vector<std::uint8_t> samples(n * static_cast<std::size_t>(channels));
  for (std::size_t k = 0; k < n; ++k) {
    // Irwin-Hall approximation of Gaussian sensor noise, sigma ~1.5 levels.
    double grain = 0.0;
    for (int r = 0; r < 3; ++r) grain += uniform_unit(rng);
    grain = (grain - 1.5) * 3.0;
    if (channels == 1) {
      const Color& px = canvas[k];
      const double luma = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2] + grain;
      samples[k] = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
    } else {
      for (std::size_t c = 0; c < 3; ++c) {
        samples[k * 3 + c] = static_cast<std::uint8_t>(
            std::clamp(std::lround(canvas[k][c] + grain), 0L, 255L));
      }
    }
  }
  return Image(width, height, channels, std::move(samples));
}

std::vector<std::filesystem::path> write_synthetic_corpus(
    const std::filesystem::path& dir, int count, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  Rng rng(seed);
  std::vector<std::filesystem::path> paths;
  for (int i = 0; i < count; ++i) {
    const int width = uniform_int(rng, 400, 640);
    const int height = uniform_int(rng, 300, 480);
    const std::uint64_t scene_seed = rng();
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%04d.png", i);
    const std::filesystem::path path = dir / name;
    save_image(synthesize_scene(scene_seed, width, height), path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace scaleguard
