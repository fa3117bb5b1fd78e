// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/records.hpp"

#include <cmath>

namespace scaleguard {

nlohmann::json finite_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

nlohmann::json to_json(const SimilarityReport& report) {
  return {{"exact", report.exact},
          {"max_abs_diff", report.max_abs_diff},
          {"mse", report.mse},
          {"psnr", finite_or_null(report.psnr)},
          {"ncc", report.ncc}};
}

nlohmann::json to_json(const EmbedReport& report) {
  return {{"pixels_written", report.pixels_written},
          {"self_overlaps", report.self_overlaps},
          {"collisions", report.collisions},
          {"fraction_perturbed", report.fraction_perturbed}};
}

nlohmann::json to_json(const DetectionReport& report, const std::string& path) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const SpectralPeak& p : report.peaks) {
    peaks.push_back({{"u", p.u}, {"v", p.v}, {"magnitude", p.magnitude}, {"ratio", p.ratio}});
  }
  nlohmann::json scales = nlohmann::json::array();
  for (const ScaleSpec& s : report.inferred_scales) {
    scales.push_back({{"width", s.width}, {"height", s.height}});
  }
  return {{"path", path},
          {"verdict", to_string(report.verdict)},
          {"score", report.score},
          {"threshold", report.threshold},
          {"peaks", std::move(peaks)},
          {"inferred_scales", std::move(scales)}};
}

}  // namespace scaleguard
