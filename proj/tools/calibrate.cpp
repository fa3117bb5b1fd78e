// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

// Picks the detection threshold on a synthetic corpus: every scene is a
// carrier once (clean) and once with a deranged partner embedded (attacked),
// and the threshold maximizing TPR - FPR wins.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scaleguard/detect.hpp"
#include "scaleguard/harness.hpp"
#include "scaleguard/image_io.hpp"
#include "scaleguard/synthetic.hpp"

int main(int argc, char** argv) {
  using namespace scaleguard;
  CLI::App app{"Calibrate the detector threshold on a synthetic corpus", "calibrate"};
  int count = 100;
  std::uint64_t seed = 1;
  std::string dir = "calibration_corpus";
  bool verbose = false;
  app.add_option("--count", count, "Scenes (and pairs)")->capture_default_str();
  app.add_option("--seed", seed, "Corpus and pairing seed")->capture_default_str();
  app.add_option("--dir", dir, "Corpus directory, created if empty")->capture_default_str();
  app.add_flag("--verbose", verbose, "Print every score");
  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg;
  cfg.corpus_dir = dir;
  cfg.seed = seed;
  std::vector<std::filesystem::path> paths;
  if (std::filesystem::exists(dir)) paths = list_corpus(dir);
  if (static_cast<int>(paths.size()) != count) {
    std::filesystem::remove_all(dir);
    paths = write_synthetic_corpus(dir, count, seed);
  }

  std::vector<double> clean;
  std::vector<double> attacked;
  for (const auto& [carrier, small] : pair_corpus(paths, seed)) {
    const PreparedPair p = prepare_pair(load_image(carrier), load_image(small), cfg);
    clean.push_back(detect(p.carrier).score);
    attacked.push_back(detect(p.attack.combined).score);
    if (verbose) {
      std::fprintf(stderr, "%s clean %.1f attacked %.1f\n", carrier.filename().c_str(),
                   clean.back(), attacked.back());
    }
  }
  const double threshold = calibrate_threshold(clean, attacked);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (double s : clean) fp += s > threshold ? 1 : 0;
  for (double s : attacked) tp += s > threshold ? 1 : 0;
  const nlohmann::json record = {
      {"pairs", clean.size()},
      {"threshold", threshold},
      {"clean_max", *std::max_element(clean.begin(), clean.end())},
      {"attacked_min", *std::min_element(attacked.begin(), attacked.end())},
      {"tpr", static_cast<double>(tp) / static_cast<double>(attacked.size())},
      {"fpr", static_cast<double>(fp) / static_cast<double>(clean.size())}};
  std::cout << record.dump() << '\n';
  return 0;
}
