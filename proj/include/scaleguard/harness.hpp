// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCALEGUARD_HARNESS_HPP_
#define SCALEGUARD_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "scaleguard/attack.hpp"
#include "scaleguard/image.hpp"
#include "scaleguard/metrics.hpp"
#include "scaleguard/resize.hpp"

namespace scaleguard {

// The four row groups of the evaluation grid: which image is resized
// (clean carrier or combined) and with which resizer.
enum class Condition {
  kCleanVulnerable,
  kAttackedVulnerable,
  kCleanAntialiased,
  kAttackedAntialiased,
};

std::string to_string(Condition condition);
Condition parse_condition(const std::string& name);
bool is_attacked(Condition condition);
ResizePolicy policy_for(Condition condition);

struct ExperimentConfig {
  std::filesystem::path corpus_dir;
  ScaleSpec carrier_scale{2000, 2000};
  ScaleSpec attack_scale{299, 299};
  ScaleSpec off_scale{224, 224};
  std::uint64_t seed = 0;
  std::vector<Condition> conditions = {
      Condition::kCleanVulnerable, Condition::kAttackedVulnerable,
      Condition::kCleanAntialiased, Condition::kAttackedAntialiased};

  // Bench outputs; empty means "do not write".
  std::filesystem::path records_path;
  std::filesystem::path summary_path;
  // When > 0 and corpus_dir holds no images, that many synthetic scenes are
  // generated there (seeded by `seed`) before the run.
  int synthesize = 0;
};

// Throws ConfigError when scales are invalid, attack_scale == off_scale,
// attack_scale is not strictly smaller than carrier_scale, or conditions is
// empty.
void validate(const ExperimentConfig& cfg);

// Parses a flat `key = value` document ('#' starts a comment). Relative paths
// are resolved against `base_dir`. Keys: corpus_dir, carrier_scale,
// attack_scale, off_scale, seed, conditions (comma separated), records,
// summary, synthesize. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Seeded uniform derangement of [0, n): result[i] != i for all i and every
// index appears once. Throws InvalidArgument when n < 2.
std::vector<std::size_t> derangement(std::size_t n, std::uint64_t seed);

// (carrier, small) pairs: each path is a carrier once and a small once, and
// never with itself.
std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pair_corpus(
    const std::vector<std::filesystem::path>& paths, std::uint64_t seed);

// Image files (.png, .ppm, .pgm, .pnm) directly inside `dir`, sorted.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

// One carrier/small pair after normalization and embedding.
struct PreparedPair {
  Image carrier;   // stretched to carrier_scale
  Image small;     // stretched to attack_scale
  AttackResult attack;
};

// Stretches both images with the vulnerable resizer (the default pipeline),
// matches the small's channel count to the carrier's, and embeds it.
PreparedPair prepare_pair(const Image& carrier, const Image& small,
                          const ExperimentConfig& cfg);

// Per pair, condition and evaluation scale. References are the clean carrier
// and the small, each resized to the evaluation scale by the vulnerable
// resizer: what a default pipeline would hand a classifier for that image.
struct PairRecord {
  std::size_t pair = 0;
  std::string carrier;
  std::string small;
  Condition condition = Condition::kCleanVulnerable;
  ScaleSpec scale;
  bool at_attack_scale = true;
  SimilarityReport big;
  SimilarityReport small_similarity;
};

struct MetricSummary {
  double exact_rate = 0.0;
  double psnr_median = 0.0;
  double psnr_q1 = 0.0;
  double psnr_q3 = 0.0;
  double ncc_median = 0.0;
  double ncc_q1 = 0.0;
  double ncc_q3 = 0.0;
};

MetricSummary summarize(const std::vector<SimilarityReport>& reports);

struct ConditionResult {
  Condition condition = Condition::kCleanVulnerable;
  ScaleSpec scale;
  bool at_attack_scale = true;
  MetricSummary big_similarity;
  MetricSummary small_similarity;
  // Fraction of pairs whose big NCC exceeds their small NCC.
  double big_wins_rate = 0.0;
  std::size_t n = 0;
};

struct ExperimentResult {
  std::vector<PairRecord> records;  // ordered by pair, scale, condition
  std::vector<ConditionResult> conditions;
  std::vector<std::string> failures;  // skipped pairs and why
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Line-delimited JSON, one object per PairRecord, then one per
// ConditionResult. Infinite PSNR is written as null.
void write_records(std::ostream& out, const ExperimentResult& result);

// Text table with the Clean / Attacked / Antialiased Clean / Antialiased
// Attacked row groups, Big and Small rows, one column block per scale.
std::string render_summary(const ExperimentResult& result, const ExperimentConfig& cfg);

}  // namespace scaleguard

#endif  // SCALEGUARD_HARNESS_HPP_
