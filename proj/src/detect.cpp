// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/detect.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "scaleguard/errors.hpp"

namespace scaleguard {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

std::vector<double> centered_plane(const Image& img, bool taper) {
  std::vector<double> plane = luminance(img);
  const double mean =
      std::accumulate(plane.begin(), plane.end(), 0.0) / static_cast<double>(plane.size());
  for (double& v : plane) v -= mean;
  if (taper) {
    const int w = img.width();
    const int h = img.height();
    std::vector<double> wx(static_cast<std::size_t>(w));
    std::vector<double> wy(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
      wx[static_cast<std::size_t>(x)] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (x + 0.5) / w);
    }
    for (int y = 0; y < h; ++y) {
      wy[static_cast<std::size_t>(y)] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (y + 0.5) / h);
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        plane[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
              static_cast<std::size_t>(x)] *=
            wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)];
      }
    }
  }
  return plane;
}

Spectrum transform(std::span<const double> plane, int width, int height) {
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  const std::size_t half = w / 2 + 1;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(w * h));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(h * half));
  if (!in || !out) throw Error("FFT buffer allocation failed");

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_2d(height, width, in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(plane.begin(), plane.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  // Expand the half spectrum by conjugate symmetry and shift DC to center.
  std::vector<double> mags(w * h);
  const std::size_t cu = w / 2;
  const std::size_t cv = h / 2;
  for (std::size_t ky = 0; ky < h; ++ky) {
    const std::size_t row = (ky + cv) % h;
    for (std::size_t kx = 0; kx < w; ++kx) {
      double re;
      double im;
      if (kx < half) {
        const fftw_complex& z = out.get()[ky * half + kx];
        re = z[0];
        im = z[1];
      } else {
        const fftw_complex& z = out.get()[((h - ky) % h) * half + (w - kx)];
        re = z[0];
        im = -z[1];
      }
      mags[row * w + (kx + cu) % w] = std::sqrt(re * re + im * im);
    }
  }
  return Spectrum(width, height, std::move(mags));
}

// Local background: medians of `window`-sized squares centered on a lattice
// with spacing `stride`, bilinearly interpolated to every bin. Centered
// windows keep the estimate unbiased on the steep slope near DC.
std::vector<double> local_medians(const Spectrum& s, int window, int stride) {
  const int w = s.width();
  const int h = s.height();
  const auto mags = s.magnitudes();
  const int gw = (w - 1) / stride + 2;
  const int gh = (h - 1) / stride + 2;
  std::vector<double> grid(static_cast<std::size_t>(gw) * static_cast<std::size_t>(gh));
  std::vector<double> scratch;
  const int half = window / 2;
  for (int gy = 0; gy < gh; ++gy) {
    const int cy = std::min(gy * stride, h - 1);
    for (int gx = 0; gx < gw; ++gx) {
      const int cx = std::min(gx * stride, w - 1);
      scratch.clear();
      for (int y = std::max(0, cy - half); y <= std::min(h - 1, cy + half); ++y) {
        const double* row = mags.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
        for (int x = std::max(0, cx - half); x <= std::min(w - 1, cx + half); ++x) {
          scratch.push_back(row[x]);
        }
      }
      auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
      std::nth_element(scratch.begin(), mid, scratch.end());
      grid[static_cast<std::size_t>(gy) * static_cast<std::size_t>(gw) +
           static_cast<std::size_t>(gx)] = *mid;
    }
  }
  std::vector<double> background(mags.size());
  for (int y = 0; y < h; ++y) {
    const int gy = y / stride;
    const double ty = static_cast<double>(y - gy * stride) / stride;
    for (int x = 0; x < w; ++x) {
      const int gx = x / stride;
      const double tx = static_cast<double>(x - gx * stride) / stride;
      auto g = [&](int ix, int iy) {
        return grid[static_cast<std::size_t>(iy) * static_cast<std::size_t>(gw) +
                    static_cast<std::size_t>(ix)];
      };
      const double top = g(gx, gy) * (1 - tx) + g(gx + 1, gy) * tx;
      const double bottom = g(gx, gy + 1) * (1 - tx) + g(gx + 1, gy + 1) * tx;
      background[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                 static_cast<std::size_t>(x)] = top * (1 - ty) + bottom * ty;
    }
  }
  return background;
}

// Pairs peak frequencies into candidate scales, strongest first.
// Distance from x to the nearest multiple of n, i.e. where frequency x lands
// after aliasing into [0, n/2].
int folded(long long x, int n) {
  const auto r = static_cast<int>(x % n);
  return std::min(r, n - r);
}

// Peaks closer than this (Chebyshev, in bins) are one spectral line split by
// the modulation of the hidden image's own content.
constexpr int kClusterReach = 4;

struct PeakCluster {
  int u = 0;  // bounding-box center
  int v = 0;
  double strength = 0.0;
};

std::vector<PeakCluster> cluster_peaks(const std::vector<SpectralPeak>& peaks) {
  const std::size_t n = peaks.size();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  auto root = [&](std::size_t k) {
    while (label[k] != k) k = label[k];
    return k;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(peaks[a].u - peaks[b].u) <= kClusterReach &&
          std::abs(peaks[a].v - peaks[b].v) <= kClusterReach) {
        label[root(b)] = root(a);
      }
    }
  }
  std::vector<PeakCluster> clusters;
  for (std::size_t a = 0; a < n; ++a) {
    if (root(a) != a) continue;
    int u_lo = peaks[a].u, u_hi = u_lo, v_lo = peaks[a].v, v_hi = v_lo;
    double strength = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (root(b) != a) continue;
      u_lo = std::min(u_lo, peaks[b].u);
      u_hi = std::max(u_hi, peaks[b].u);
      v_lo = std::min(v_lo, peaks[b].v);
      v_hi = std::max(v_hi, peaks[b].v);
      strength = std::max(strength, peaks[b].ratio);
    }
    clusters.push_back({(u_lo + u_hi) / 2, (v_lo + v_hi) / 2, strength});
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const PeakCluster& a, const PeakCluster& b) { return a.strength > b.strength; });
  return clusters;
}

// Strongest candidate that is not a harmonic of another candidate. A lattice
// with fundamental f also lights up k*f, aliased modulo the extent.
int fundamental(const std::vector<int>& candidates, int extent) {
  for (int c : candidates) {
    bool harmonic = false;
    for (int f : candidates) {
      if (f >= c) continue;
      for (int k = 2; k <= 8 && !harmonic; ++k) {
        harmonic = std::abs(folded(static_cast<long long>(k) * f, extent) - c) <= k;
      }
    }
    if (!harmonic) return c;
  }
  return candidates.empty() ? 0 : candidates.front();
}

// Embedding at extent I along an axis of extent N writes a lattice of period
// N / I, whose fundamental sits at frequency bin I.
std::vector<ScaleSpec> infer_scales(const std::vector<SpectralPeak>& peaks, int width,
                                    int height, int guard) {
  std::vector<int> widths;
  std::vector<int> heights;
  std::vector<ScaleSpec> diagonal;
  for (const PeakCluster& c : cluster_peaks(peaks)) {
    if (std::abs(c.u) <= guard) {
      heights.push_back(std::abs(c.v));
    } else if (std::abs(c.v) <= guard) {
      widths.push_back(std::abs(c.u));
    } else {
      diagonal.push_back({std::abs(c.u), std::abs(c.v)});
    }
  }
  std::vector<ScaleSpec> scales;
  auto add = [&](ScaleSpec s) {
    for (const ScaleSpec& known : scales) {
      if (std::abs(known.width - s.width) <= 1 && std::abs(known.height - s.height) <= 1) {
        return;
      }
    }
    scales.push_back(s);
  };
  if (!widths.empty() && !heights.empty()) {
    add({fundamental(widths, width), fundamental(heights, height)});
  }
  for (const ScaleSpec& d : diagonal) add(d);
  return scales;
}

}  // namespace

Spectrum::Spectrum(int width, int height, std::vector<double> magnitudes)
    : width_(width), height_(height), magnitudes_(std::move(magnitudes)) {
  if (width < 1 || height < 1 ||
      magnitudes_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("spectrum dimensions do not match magnitude count");
  }
}

double Spectrum::at(int u, int v) const {
  const int col = ((u + width_ / 2) % width_ + width_) % width_;
  const int row = ((v + height_ / 2) % height_ + height_) % height_;
  return magnitudes_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                     static_cast<std::size_t>(col)];
}

Image Spectrum::render_log() const {
  double peak = 0.0;
  for (double m : magnitudes_) peak = std::max(peak, std::log1p(m));
  std::vector<std::uint8_t> out(magnitudes_.size(), 0);
  if (peak > 0.0) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = static_cast<std::uint8_t>(
          std::clamp(std::lround(255.0 * std::log1p(magnitudes_[k]) / peak), 0L, 255L));
    }
  }
  return Image(width_, height_, 1, std::move(out));
}

std::vector<double> luminance(const Image& img) {
  std::vector<double> plane(img.pixel_count());
  const auto s = img.samples();
  if (img.channels() == 1) {
    std::copy(s.begin(), s.end(), plane.begin());
  } else {
    for (std::size_t k = 0; k < plane.size(); ++k) {
      plane[k] = 0.299 * s[3 * k] + 0.587 * s[3 * k + 1] + 0.114 * s[3 * k + 2];
    }
  }
  return plane;
}

Spectrum spectrum(const Image& img) {
  return transform(centered_plane(img, false), img.width(), img.height());
}

Spectrum windowed_spectrum(const Image& img) {
  return transform(centered_plane(img, true), img.width(), img.height());
}

DetectionReport detect(const Image& img, double threshold,
                       const DetectorOptions& options) {
  if (img.width() < kMinDetectableExtent || img.height() < kMinDetectableExtent) {
    throw InvalidArgument("image " + ScaleSpec::of(img).to_string() +
                          " is too small for detection (minimum " +
                          std::to_string(kMinDetectableExtent) + " on each side)");
  }
  DetectionReport report;
  report.threshold = threshold;

  const Spectrum s = windowed_spectrum(img);
  const int w = s.width();
  const int h = s.height();
  const int cu = w / 2;
  const int cv = h / 2;
  const std::vector<double> background =
      local_medians(s, options.background_window, options.background_stride);
  const auto mags = s.magnitudes();

  std::vector<double> ratio(mags.size(), 0.0);
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (background[k] > 0.0) ratio[k] = mags[k] / background[k];
  }
  std::vector<double> energy(ratio.size());
  std::transform(ratio.begin(), ratio.end(), energy.begin(), [](double r) { return r * r; });
  auto mid = energy.begin() + static_cast<std::ptrdiff_t>(energy.size() / 2);
  std::nth_element(energy.begin(), mid, energy.end());
  const double median_energy = *mid;

  auto ratio_at = [&](int row, int col) {
    return ratio[static_cast<std::size_t>(row) * static_cast<std::size_t>(w) +
                 static_cast<std::size_t>(col)];
  };

  // Upper half-plane (v > 0, or v == 0 with u > 0); its mirror is redundant.
  std::vector<SpectralPeak> candidates;
  const int r = options.isolation_radius;
  for (int row = cv; row < h; ++row) {
    const int v = row - cv;
    for (int col = 0; col < w; ++col) {
      const int u = col - cu;
      if (v == 0 && u <= 0) continue;
      if (std::abs(u) <= options.guard_band && std::abs(v) <= options.guard_band) continue;
      const double here = ratio_at(row, col);
      if (here <= 1.0) continue;
      bool isolated = true;
      for (int dy = -r; dy <= r && isolated; ++dy) {
        const int yy = row + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = col + dx;
          if ((dx == 0 && dy == 0) || xx < 0 || xx >= w) continue;
          const double other = ratio_at(yy, xx);
          // Ties resolve toward the earlier bin in scan order.
          if (other > here || (other == here && (dy < 0 || (dy == 0 && dx < 0)))) {
            isolated = false;
            break;
          }
        }
      }
      if (isolated) {
        candidates.push_back({u, v, mags[static_cast<std::size_t>(row) * w + col], here});
      }
    }
  }

  const auto k = std::min<std::size_t>(static_cast<std::size_t>(options.top_k),
                                       candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
                      if (a.ratio != b.ratio) return a.ratio > b.ratio;
                      if (a.v != b.v) return a.v < b.v;
                      return a.u < b.u;
                    });
  candidates.resize(k);
  report.peaks = std::move(candidates);

  if (k > 0 && median_energy > 0.0) {
    double peak_energy = 0.0;
    for (const SpectralPeak& p : report.peaks) peak_energy += p.ratio * p.ratio;
    report.score = peak_energy / static_cast<double>(k) / median_energy;
  }
  report.verdict = report.score > threshold ? Verdict::kAttacked : Verdict::kClean;
  report.inferred_scales = infer_scales(report.peaks, w, h, options.guard_band);
  std::stable_sort(report.peaks.begin(), report.peaks.end(),
                   [](const SpectralPeak& a, const SpectralPeak& b) {
                     return a.magnitude > b.magnitude;
                   });
  return report;
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::kAttacked ? "attacked" : "clean";
}

double calibrate_threshold(std::span<const double> clean_scores,
                           std::span<const double> attacked_scores) {
  if (clean_scores.empty() || attacked_scores.empty()) {
    throw InvalidArgument("calibration needs clean and attacked scores");
  }
  std::vector<double> all(clean_scores.begin(), clean_scores.end());
  all.insert(all.end(), attacked_scores.begin(), attacked_scores.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  auto rate_above = [](std::span<const double> scores, double t) {
    const auto n = std::count_if(scores.begin(), scores.end(), [t](double s) { return s > t; });
    return static_cast<double>(n) / static_cast<double>(scores.size());
  };
  // Candidate thresholds sit between consecutive distinct scores, plus one
  // below everything.
  double best_threshold = 0.0;
  double best_j = -2.0;
  for (std::size_t i = 0; i <= all.size(); ++i) {
    double t;
    if (i == 0) {
      t = all.front() - 1.0;
    } else if (i < all.size()) {
      t = 0.5 * (all[i - 1] + all[i]);
    } else {
      t = all.back() + 1.0;
    }
    const double j = rate_above(attacked_scores, t) - rate_above(clean_scores, t);
    if (j > best_j) {
      best_j = j;
      best_threshold = t;
    }
  }
  return best_threshold;
}

}  // namespace scaleguard
