// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_TESTS_RESIZE_ORACLE_HPP_
#define SCALEGUARD_TESTS_RESIZE_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "scaleguard/image.hpp"

namespace scaleguard::testing {

// Exact rational with int64 parts; enough headroom for extents up to a few
// thousand.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Frac(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Frac operator+(Frac a, Frac b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Frac operator-(Frac a, Frac b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Frac operator*(Frac a, Frac b) { return {a.num * b.num, a.den * b.den}; }
  std::int64_t floor() const { return num >= 0 ? num / den : -((-num + den - 1) / den); }
  std::int64_t ceil() const { return -Frac(-num, den).floor(); }
};

// Straight transcription of the three interpolation equations: coordinate
// map, clamped floor/ceil neighbors, then the 1x2 * 2x2 * 2x1 weighted
// product, evaluated exactly and rounded half away from zero.
inline Image oracle_resize(const Image& img, int out_w, int out_h) {
  const int N = img.width();
  const int M = img.height();
  std::vector<std::uint8_t> out;
  for (int j = 0; j < out_h; ++j) {
    for (int i = 0; i < out_w; ++i) {
      const Frac x = Frac(2 * i + 1, 2) * Frac(N, out_w);
      const Frac y = Frac(2 * j + 1, 2) * Frac(M, out_h);
      const Frac xs = x - Frac(1, 2);
      const Frac ys = y - Frac(1, 2);
      const auto nl = static_cast<int>(std::clamp<std::int64_t>(xs.floor(), 0, N - 1));
      const auto nu = static_cast<int>(std::clamp<std::int64_t>(xs.ceil(), 0, N - 1));
      const auto ml = static_cast<int>(std::clamp<std::int64_t>(ys.floor(), 0, M - 1));
      const auto mu = static_cast<int>(std::clamp<std::int64_t>(ys.ceil(), 0, M - 1));
      const Frac wx[2] = {nl == nu ? Frac(1) : Frac(nu) - xs, nl == nu ? Frac(0) : xs - Frac(nl)};
      const Frac wy[2] = {ml == mu ? Frac(1) : Frac(mu) - ys, ml == mu ? Frac(0) : ys - Frac(ml)};
      for (int c = 0; c < img.channels(); ++c) {
        const Frac f[2][2] = {{Frac(img.at(nl, ml, c)), Frac(img.at(nl, mu, c))},
                              {Frac(img.at(nu, ml, c)), Frac(img.at(nu, mu, c))}};
        Frac v;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) v = v + wx[a] * f[a][b] * wy[b];
        }
        out.push_back(static_cast<std::uint8_t>((v + Frac(1, 2)).floor()));
      }
    }
  }
  return Image(out_w, out_h, img.channels(), std::move(out));
}

}  // namespace scaleguard::testing

#endif  // SCALEGUARD_TESTS_RESIZE_ORACLE_HPP_
