// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_RECORDS_HPP_
#define SCALEGUARD_RECORDS_HPP_

#include <string>

#include "json.hpp"
#include "scaleguard/attack.hpp"
#include "scaleguard/detect.hpp"
#include "scaleguard/metrics.hpp"

// JSON forms of the reports every subcommand prints. Non-finite numbers
// (PSNR of identical images) are written as null.
namespace scaleguard {

nlohmann::json to_json(const SimilarityReport& report);
nlohmann::json to_json(const EmbedReport& report);
nlohmann::json to_json(const DetectionReport& report, const std::string& path);

// null for +-inf and NaN.
nlohmann::json finite_or_null(double value);

}  // namespace scaleguard

#endif  // SCALEGUARD_RECORDS_HPP_
