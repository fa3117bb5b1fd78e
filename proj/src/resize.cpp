// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/resize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "scaleguard/errors.hpp"

namespace scaleguard {
namespace {

struct Tap {
  int index;
  double weight;
};

// Taps of every output index along one axis.
using AxisTable = std::vector<std::vector<Tap>>;

std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

AxisTable vulnerable_table(int target, int source) {
  AxisTable table(static_cast<std::size_t>(target));
  for (int i = 0; i < target; ++i) {
    const VulnerableTaps t = vulnerable_taps(i, target, source);
    const double den = static_cast<double>(t.denominator);
    if (t.lo == t.hi) {
      table[static_cast<std::size_t>(i)] = {{t.lo, 1.0}};
    } else {
      table[static_cast<std::size_t>(i)] = {
          {t.lo, static_cast<double>(t.lo_weight) / den},
          {t.hi, static_cast<double>(t.hi_weight) / den}};
    }
  }
  return table;
}

// Tent of radius max(1, source / target) centered on the mapped coordinate.
// Out-of-range taps fold onto the edge pixel; weights are normalized.
AxisTable tent_table(int target, int source) {
  const double scale = static_cast<double>(source) / static_cast<double>(target);
  const double radius = std::max(1.0, scale);
  AxisTable table(static_cast<std::size_t>(target));
  for (int i = 0; i < target; ++i) {
    const double center = map_coordinate(i, target, source);
    const auto first = static_cast<int>(std::floor(center - 0.5 - radius)) + 1;
    const auto last = static_cast<int>(std::ceil(center - 0.5 + radius)) - 1;
    std::vector<Tap>& taps = table[static_cast<std::size_t>(i)];
    double sum = 0.0;
    for (int k = first; k <= last; ++k) {
      const double w = 1.0 - std::abs(k + 0.5 - center) / radius;
      if (w <= 0.0) continue;
      const int clamped = std::clamp(k, 0, source - 1);
      if (!taps.empty() && taps.back().index == clamped) {
        taps.back().weight += w;
      } else {
        taps.push_back({clamped, w});
      }
      sum += w;
    }
    for (Tap& tap : taps) tap.weight /= sum;
  }
  return table;
}

// One resampling pass: source extent -> target extent through two tables.
struct Pass {
  ScaleSpec from;
  ScaleSpec to;
  AxisTable cols;
  AxisTable rows;
};

Pass make_pass(const ScaleSpec& from, const ScaleSpec& to, bool antialias) {
  Pass pass{from, to, {}, {}};
  if (antialias) {
    pass.cols = tent_table(to.width, from.width);
    pass.rows = tent_table(to.height, from.height);
  } else {
    pass.cols = vulnerable_table(to.width, from.width);
    pass.rows = vulnerable_table(to.height, from.height);
  }
  return pass;
}

std::vector<Pass> plan_passes(const ScaleSpec& source, const ScaleSpec& spec,
                              const ResizePolicy& policy) {
  std::vector<Pass> passes;
  switch (policy.mode) {
    case ResizeMode::kVulnerableBilinear:
      passes.push_back(make_pass(source, spec, false));
      break;
    case ResizeMode::kAntialiasedBilinear:
      passes.push_back(make_pass(source, spec, true));
      break;
    case ResizeMode::kMultiStep: {
      ScaleSpec from = source;
      for (const ScaleSpec& to :
           multistep_schedule(source, spec, policy.step_shrink_limit)) {
        passes.push_back(make_pass(from, to, false));
        from = to;
      }
      if (passes.empty()) passes.push_back(make_pass(source, spec, false));
      break;
    }
  }
  return passes;
}

// Separable application of a pass to an interleaved double raster.
std::vector<double> apply_pass(std::span<const double> src, int channels,
                               const Pass& pass) {
  const auto ch = static_cast<std::size_t>(channels);
  const auto src_w = static_cast<std::size_t>(pass.from.width);
  const auto dst_w = static_cast<std::size_t>(pass.to.width);
  const auto src_h = static_cast<std::size_t>(pass.from.height);
  const auto dst_h = static_cast<std::size_t>(pass.to.height);

  std::vector<double> horizontal(src_h * dst_w * ch, 0.0);
  for (std::size_t row = 0; row < src_h; ++row) {
    const double* in = src.data() + row * src_w * ch;
    double* out = horizontal.data() + row * dst_w * ch;
    for (std::size_t i = 0; i < dst_w; ++i) {
      for (const Tap& tap : pass.cols[i]) {
        const double* px = in + static_cast<std::size_t>(tap.index) * ch;
        for (std::size_t c = 0; c < ch; ++c) out[i * ch + c] += tap.weight * px[c];
      }
    }
  }

  std::vector<double> result(dst_h * dst_w * ch, 0.0);
  for (std::size_t j = 0; j < dst_h; ++j) {
    double* out = result.data() + j * dst_w * ch;
    for (const Tap& tap : pass.rows[j]) {
      const double* in =
          horizontal.data() + static_cast<std::size_t>(tap.index) * dst_w * ch;
      for (std::size_t k = 0; k < dst_w * ch; ++k) out[k] += tap.weight * in[k];
    }
  }
  return result;
}

// Transpose of apply_pass for a single plane.
std::vector<double> apply_pass_adjoint(std::span<const double> dst,
                                       const Pass& pass) {
  const auto src_w = static_cast<std::size_t>(pass.from.width);
  const auto dst_w = static_cast<std::size_t>(pass.to.width);
  const auto src_h = static_cast<std::size_t>(pass.from.height);
  const auto dst_h = static_cast<std::size_t>(pass.to.height);

  std::vector<double> horizontal(src_h * dst_w, 0.0);
  for (std::size_t j = 0; j < dst_h; ++j) {
    const double* in = dst.data() + j * dst_w;
    for (const Tap& tap : pass.rows[j]) {
      double* out = horizontal.data() + static_cast<std::size_t>(tap.index) * dst_w;
      for (std::size_t i = 0; i < dst_w; ++i) out[i] += tap.weight * in[i];
    }
  }
  std::vector<double> result(src_h * src_w, 0.0);
  for (std::size_t row = 0; row < src_h; ++row) {
    const double* in = horizontal.data() + row * dst_w;
    double* out = result.data() + row * src_w;
    for (std::size_t i = 0; i < dst_w; ++i) {
      if (in[i] == 0.0) continue;
      for (const Tap& tap : pass.cols[i]) {
        out[static_cast<std::size_t>(tap.index)] += tap.weight * in[i];
      }
    }
  }
  return result;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

Image resize_vulnerable(const Image& img, const ScaleSpec& spec) {
  std::vector<VulnerableTaps> cols(static_cast<std::size_t>(spec.width));
  std::vector<VulnerableTaps> rows(static_cast<std::size_t>(spec.height));
  for (int i = 0; i < spec.width; ++i) {
    cols[static_cast<std::size_t>(i)] = vulnerable_taps(i, spec.width, img.width());
  }
  for (int j = 0; j < spec.height; ++j) {
    rows[static_cast<std::size_t>(j)] = vulnerable_taps(j, spec.height, img.height());
  }
  const int ch = img.channels();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(spec.width) *
                                static_cast<std::size_t>(spec.height) *
                                static_cast<std::size_t>(ch));
  std::size_t k = 0;
  for (const VulnerableTaps& ty : rows) {
    for (const VulnerableTaps& tx : cols) {
      const std::int64_t den = tx.denominator * ty.denominator;
      for (int c = 0; c < ch; ++c) {
        const std::int64_t top = tx.lo_weight * img.at(tx.lo, ty.lo, c) +
                                 tx.hi_weight * img.at(tx.hi, ty.lo, c);
        const std::int64_t bottom = tx.lo_weight * img.at(tx.lo, ty.hi, c) +
                                    tx.hi_weight * img.at(tx.hi, ty.hi, c);
        const std::int64_t num = ty.lo_weight * top + ty.hi_weight * bottom;
        // Round half away from zero; num is non-negative.
        out[k++] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
      }
    }
  }
  return Image(spec.width, spec.height, ch, std::move(out));
}

Image resize_antialiased(const Image& img, const ScaleSpec& spec) {
  // With no shrinking on either axis the tent is the bilinear kernel.
  if (spec.width >= img.width() && spec.height >= img.height()) {
    return resize_vulnerable(img, spec);
  }
  const Pass pass = make_pass(ScaleSpec::of(img), spec, true);
  std::vector<double> src(img.samples().begin(), img.samples().end());
  const std::vector<double> dst = apply_pass(src, img.channels(), pass);
  std::vector<std::uint8_t> out(dst.size());
  std::transform(dst.begin(), dst.end(), out.begin(), quantize);
  return Image(spec.width, spec.height, img.channels(), std::move(out));
}

}  // namespace

ScaleSpec ScaleSpec::parse(std::string_view text) {
  const auto sep = text.find_first_of("xX");
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    const char* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc() || ptr != end || value < 1) {
      throw InvalidArgument("invalid size '" + std::string(text) +
                            "', expected WxH with positive integers");
    }
    return value;
  };
  if (sep == std::string_view::npos) {
    throw InvalidArgument("invalid size '" + std::string(text) + "', expected WxH");
  }
  return {parse_int(text.substr(0, sep)), parse_int(text.substr(sep + 1))};
}

std::string ScaleSpec::to_string() const {
  return std::to_string(width) + "x" + std::to_string(height);
}

void validate(const ScaleSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw InvalidArgument("scale " + spec.to_string() + " must be at least 1x1");
  }
}

ResizePolicy ResizePolicy::parse(std::string_view name) {
  if (name == "vulnerable") return vulnerable();
  if (name == "antialias" || name == "antialiased") return antialiased();
  if (name == "multistep") return multistep();
  throw InvalidArgument("unknown resize policy '" + std::string(name) + "'");
}

std::string ResizePolicy::name() const {
  switch (mode) {
    case ResizeMode::kVulnerableBilinear:
      return "vulnerable";
    case ResizeMode::kAntialiasedBilinear:
      return "antialias";
    case ResizeMode::kMultiStep:
      return "multistep";
  }
  return "unknown";
}

void validate(const ResizePolicy& policy) {
  if (policy.mode == ResizeMode::kMultiStep && !(policy.step_shrink_limit > 1.0)) {
    throw InvalidArgument("multistep shrink limit must exceed 1");
  }
}

double map_coordinate(int i, int target_extent, int source_extent) {
  return (i + 0.5) * static_cast<double>(source_extent) /
         static_cast<double>(target_extent);
}

NeighborSet neighbors(double x, double y, int source_width, int source_height) {
  NeighborSet n;
  n.x = x;
  n.y = y;
  n.n_l = std::clamp(static_cast<int>(std::floor(x - 0.5)), 0, source_width - 1);
  n.n_u = std::clamp(static_cast<int>(std::ceil(x - 0.5)), 0, source_width - 1);
  n.m_l = std::clamp(static_cast<int>(std::floor(y - 0.5)), 0, source_height - 1);
  n.m_u = std::clamp(static_cast<int>(std::ceil(y - 0.5)), 0, source_height - 1);
  return n;
}

std::vector<double> bilinear_sample(const Image& img, double x, double y) {
  const NeighborSet n = neighbors(x, y, img.width(), img.height());
  // Weight on the upper index along each axis; 0 on a collapsed axis.
  const double wx = n.n_u == n.n_l ? 0.0 : (x - 0.5) - n.n_l;
  const double wy = n.m_u == n.m_l ? 0.0 : (y - 0.5) - n.m_l;
  std::vector<double> out(static_cast<std::size_t>(img.channels()));
  for (int c = 0; c < img.channels(); ++c) {
    const double top = (1.0 - wx) * img.at(n.n_l, n.m_l, c) + wx * img.at(n.n_u, n.m_l, c);
    const double bottom = (1.0 - wx) * img.at(n.n_l, n.m_u, c) + wx * img.at(n.n_u, n.m_u, c);
    out[static_cast<std::size_t>(c)] = (1.0 - wy) * top + wy * bottom;
  }
  return out;
}

VulnerableTaps vulnerable_taps(int i, int target_extent, int source_extent) {
  // x - 0.5 = ((2i + 1) * N - I) / (2I), kept as an exact rational.
  const std::int64_t den = 2 * static_cast<std::int64_t>(target_extent);
  const std::int64_t num = (2 * static_cast<std::int64_t>(i) + 1) * source_extent -
                           static_cast<std::int64_t>(target_extent);
  const std::int64_t lower = floor_div(num, den);
  const std::int64_t frac = num - lower * den;  // in [0, den)
  const std::int64_t upper = frac == 0 ? lower : lower + 1;

  VulnerableTaps taps;
  taps.denominator = den;
  taps.lo = static_cast<int>(std::clamp<std::int64_t>(lower, 0, source_extent - 1));
  taps.hi = static_cast<int>(std::clamp<std::int64_t>(upper, 0, source_extent - 1));
  if (taps.lo == taps.hi) {
    taps.lo_weight = den;
    taps.hi_weight = 0;
  } else {
    taps.lo_weight = den - frac;
    taps.hi_weight = frac;
  }
  return taps;
}

Image resize(const Image& img, const ScaleSpec& spec, const ResizePolicy& policy) {
  validate(spec);
  validate(policy);
  if (spec == ScaleSpec::of(img)) return img;
  switch (policy.mode) {
    case ResizeMode::kVulnerableBilinear:
      return resize_vulnerable(img, spec);
    case ResizeMode::kAntialiasedBilinear:
      return resize_antialiased(img, spec);
    case ResizeMode::kMultiStep: {
      Image current = img;
      for (const ScaleSpec& step :
           multistep_schedule(ScaleSpec::of(img), spec, policy.step_shrink_limit)) {
        current = resize_vulnerable(current, step);
      }
      return current;
    }
  }
  return img;
}

std::vector<ScaleSpec> multistep_schedule(const ScaleSpec& source,
                                          const ScaleSpec& spec,
                                          double step_shrink_limit) {
  if (!(step_shrink_limit > 1.0)) {
    throw InvalidArgument("multistep shrink limit must exceed 1");
  }
  auto next_extent = [&](int current, int target) {
    if (current <= target) return target;
    const auto bounded =
        static_cast<int>(std::ceil(static_cast<double>(current) / step_shrink_limit));
    return std::max(target, bounded);
  };
  std::vector<ScaleSpec> steps;
  ScaleSpec current = source;
  while (!(current == spec)) {
    current = {next_extent(current.width, spec.width),
               next_extent(current.height, spec.height)};
    steps.push_back(current);
  }
  return steps;
}

std::vector<double> resample_plane(std::span<const double> plane,
                                   const ScaleSpec& source,
                                   const ScaleSpec& spec,
                                   const ResizePolicy& policy) {
  validate(source);
  validate(spec);
  validate(policy);
  if (plane.size() != static_cast<std::size_t>(source.width) *
                          static_cast<std::size_t>(source.height)) {
    throw DimensionMismatch("plane size does not match " + source.to_string());
  }
  std::vector<double> current(plane.begin(), plane.end());
  if (source == spec) return current;
  for (const Pass& pass : plan_passes(source, spec, policy)) {
    current = apply_pass(current, 1, pass);
  }
  return current;
}

ContributionMap::ContributionMap(ScaleSpec source, std::vector<double> weights)
    : source_(source), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<std::size_t>(source_.width) *
                             static_cast<std::size_t>(source_.height)) {
    throw DimensionMismatch("contribution map size does not match " +
                            source_.to_string());
  }
}

std::size_t ContributionMap::support() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](double w) { return w != 0.0; }));
}

double ContributionMap::max_weight() const {
  return *std::max_element(weights_.begin(), weights_.end());
}

double ContributionMap::total() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

Image ContributionMap::render() const {
  const double peak = max_weight();
  std::vector<std::uint8_t> out(weights_.size(), 0);
  if (peak > 0.0) {
    std::transform(weights_.begin(), weights_.end(), out.begin(),
                   [peak](double w) { return quantize(255.0 * w / peak); });
  }
  return Image(source_.width, source_.height, 1, std::move(out));
}

ContributionMap contribution_map(const ScaleSpec& source, const ScaleSpec& spec,
                                 const PixelCoord& probe,
                                 const ResizePolicy& policy) {
  validate(source);
  validate(spec);
  validate(policy);
  PixelCoord checked(probe.col(), probe.row(), spec.width, spec.height);
  std::vector<double> field(static_cast<std::size_t>(spec.width) *
                                static_cast<std::size_t>(spec.height),
                            0.0);
  field[static_cast<std::size_t>(checked.row()) * static_cast<std::size_t>(spec.width) +
        static_cast<std::size_t>(checked.col())] = 1.0;
  if (source == spec) return ContributionMap(source, std::move(field));
  const std::vector<Pass> passes = plan_passes(source, spec, policy);
  for (auto it = passes.rbegin(); it != passes.rend(); ++it) {
    field = apply_pass_adjoint(field, *it);
  }
  return ContributionMap(source, std::move(field));
}

}  // namespace scaleguard
