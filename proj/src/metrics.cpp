// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "scaleguard/errors.hpp"
#include "scaleguard/resize.hpp"

namespace scaleguard {

SimilarityReport compare(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("cannot compare " + ScaleSpec::of(a).to_string() + "x" +
                            std::to_string(a.channels()) + " with " +
                            ScaleSpec::of(b).to_string() + "x" +
                            std::to_string(b.channels()));
  }
  const auto sa = a.samples();
  const auto sb = b.samples();
  const double n = static_cast<double>(sa.size());

  double sum_a = 0.0;
  double sum_b = 0.0;
  double sq_err = 0.0;
  int max_diff = 0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    const int d = static_cast<int>(sa[k]) - static_cast<int>(sb[k]);
    max_diff = std::max(max_diff, std::abs(d));
    sq_err += static_cast<double>(d) * d;
    sum_a += sa[k];
    sum_b += sb[k];
  }
  const double mean_a = sum_a / n;
  const double mean_b = sum_b / n;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    const double da = sa[k] - mean_a;
    const double db = sb[k] - mean_b;
    var_a += da * da;
    var_b += db * db;
    cov += da * db;
  }

  SimilarityReport r;
  r.max_abs_diff = max_diff;
  r.exact = max_diff == 0;
  r.mse = sq_err / n;
  r.psnr = r.exact ? std::numeric_limits<double>::infinity()
                   : 10.0 * std::log10(255.0 * 255.0 / r.mse);
  if (var_a == 0.0 || var_b == 0.0) {
    r.ncc = (var_a == 0.0 && var_b == 0.0 && r.exact) ? 1.0 : 0.0;
  } else {
    r.ncc = std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
  }
  return r;
}

}  // namespace scaleguard
