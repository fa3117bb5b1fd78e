// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "scaleguard/errors.hpp"
#include "scaleguard/image_io.hpp"
#include "scaleguard/random.hpp"
#include "scaleguard/records.hpp"
#include "scaleguard/synthetic.hpp"

namespace scaleguard {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo == hi || frac == 0.0 || values[lo] == values[hi]) return values[lo];
  return values[lo] + (values[hi] - values[lo]) * frac;
}

Image match_channels(const Image& img, int channels) {
  if (img.channels() == channels) return img;
  const auto s = img.samples();
  std::vector<std::uint8_t> out;
  out.reserve(img.pixel_count() * static_cast<std::size_t>(channels));
  if (channels == 3) {
    for (std::uint8_t v : s) out.insert(out.end(), 3, v);
  } else {
    for (std::size_t k = 0; k < img.pixel_count(); ++k) {
      const double luma = 0.299 * s[3 * k] + 0.587 * s[3 * k + 1] + 0.114 * s[3 * k + 2];
      out.push_back(static_cast<std::uint8_t>(std::lround(luma)));
    }
  }
  return Image(img.width(), img.height(), channels, std::move(out));
}

const char* row_group_label(Condition c) {
  switch (c) {
    case Condition::kCleanVulnerable:
      return "Clean";
    case Condition::kAttackedVulnerable:
      return "Attacked";
    case Condition::kCleanAntialiased:
      return "Antialiased Clean";
    case Condition::kAttackedAntialiased:
      return "Antialiased Attacked";
  }
  return "?";
}

std::string format_db(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

nlohmann::json summary_json(const MetricSummary& s) {
  return {{"exact_rate", s.exact_rate},
          {"psnr_median", finite_or_null(s.psnr_median)},
          {"psnr_q1", finite_or_null(s.psnr_q1)},
          {"psnr_q3", finite_or_null(s.psnr_q3)},
          {"ncc_median", s.ncc_median},
          {"ncc_q1", s.ncc_q1},
          {"ncc_q3", s.ncc_q3}};
}

}  // namespace

std::string to_string(Condition condition) {
  switch (condition) {
    case Condition::kCleanVulnerable:
      return "clean-vulnerable";
    case Condition::kAttackedVulnerable:
      return "attacked-vulnerable";
    case Condition::kCleanAntialiased:
      return "clean-antialiased";
    case Condition::kAttackedAntialiased:
      return "attacked-antialiased";
  }
  return "unknown";
}

Condition parse_condition(const std::string& name) {
  for (Condition c : {Condition::kCleanVulnerable, Condition::kAttackedVulnerable,
                      Condition::kCleanAntialiased, Condition::kAttackedAntialiased}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown condition '" + name + "'");
}

bool is_attacked(Condition condition) {
  return condition == Condition::kAttackedVulnerable ||
         condition == Condition::kAttackedAntialiased;
}

ResizePolicy policy_for(Condition condition) {
  return (condition == Condition::kCleanAntialiased ||
          condition == Condition::kAttackedAntialiased)
             ? ResizePolicy::antialiased()
             : ResizePolicy::vulnerable();
}

void validate(const ExperimentConfig& cfg) {
  for (const ScaleSpec* s : {&cfg.carrier_scale, &cfg.attack_scale, &cfg.off_scale}) {
    if (s->width < 1 || s->height < 1) throw ConfigError("scales must be at least 1x1");
  }
  if (cfg.attack_scale == cfg.off_scale) {
    throw ConfigError("attack_scale and off_scale must differ");
  }
  if (cfg.attack_scale.width >= cfg.carrier_scale.width ||
      cfg.attack_scale.height >= cfg.carrier_scale.height) {
    throw ConfigError("attack_scale must be strictly smaller than carrier_scale");
  }
  if (cfg.conditions.empty()) throw ConfigError("no conditions selected");
  if (cfg.synthesize < 0) throw ConfigError("synthesize must be non-negative");
}

ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  auto resolve = [&](const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = "line " + std::to_string(line_no) + " (" + key + "): ";
    try {
      if (key == "corpus_dir") {
        cfg.corpus_dir = resolve(value);
      } else if (key == "carrier_scale") {
        cfg.carrier_scale = ScaleSpec::parse(value);
      } else if (key == "attack_scale") {
        cfg.attack_scale = ScaleSpec::parse(value);
      } else if (key == "off_scale") {
        cfg.off_scale = ScaleSpec::parse(value);
      } else if (key == "seed") {
        std::size_t used = 0;
        cfg.seed = std::stoull(value, &used);
        if (used != value.size()) throw ConfigError("not an integer");
      } else if (key == "synthesize") {
        std::size_t used = 0;
        cfg.synthesize = std::stoi(value, &used);
        if (used != value.size()) throw ConfigError("not an integer");
      } else if (key == "conditions") {
        cfg.conditions.clear();
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) cfg.conditions.push_back(parse_condition(trim(item)));
      } else if (key == "records") {
        cfg.records_path = resolve(value);
      } else if (key == "summary") {
        cfg.summary_path = resolve(value);
      } else {
        throw ConfigError("unknown key");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (cfg.corpus_dir.empty()) throw ConfigError("missing required key corpus_dir");
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

std::vector<std::size_t> derangement(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("pairing needs at least 2 images");
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  // Rejection sampling over uniform permutations gives a uniform derangement;
  // about e attempts are expected.
  for (;;) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
    }
    bool fixed_point = false;
    for (std::size_t i = 0; i < n && !fixed_point; ++i) fixed_point = perm[i] == i;
    if (!fixed_point) return perm;
  }
}

std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pair_corpus(
    const std::vector<std::filesystem::path>& paths, std::uint64_t seed) {
  const std::vector<std::size_t> perm = derangement(paths.size(), seed);
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;
  pairs.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) pairs.emplace_back(paths[i], paths[perm[i]]);
  return pairs;
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::filesystem::path> paths;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw IoError("cannot list corpus " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

PreparedPair prepare_pair(const Image& carrier, const Image& small,
                          const ExperimentConfig& cfg) {
  Image big = resize(carrier, cfg.carrier_scale, ResizePolicy::vulnerable());
  Image hidden = match_channels(resize(small, cfg.attack_scale, ResizePolicy::vulnerable()),
                                big.channels());
  AttackResult attack = generate_attack({big, {{hidden, cfg.attack_scale}}});
  return {std::move(big), std::move(hidden), std::move(attack)};
}

MetricSummary summarize(const std::vector<SimilarityReport>& reports) {
  MetricSummary s;
  if (reports.empty()) return s;
  std::vector<double> psnr;
  std::vector<double> ncc;
  std::size_t exact = 0;
  for (const SimilarityReport& r : reports) {
    psnr.push_back(r.psnr);
    ncc.push_back(r.ncc);
    exact += r.exact ? 1 : 0;
  }
  s.exact_rate = static_cast<double>(exact) / static_cast<double>(reports.size());
  s.psnr_median = quantile(psnr, 0.5);
  s.psnr_q1 = quantile(psnr, 0.25);
  s.psnr_q3 = quantile(psnr, 0.75);
  s.ncc_median = quantile(ncc, 0.5);
  s.ncc_q1 = quantile(ncc, 0.25);
  s.ncc_q3 = quantile(ncc, 0.75);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.synthesize > 0) std::filesystem::create_directories(cfg.corpus_dir);
  std::vector<std::filesystem::path> paths = list_corpus(cfg.corpus_dir);
  if (paths.empty() && cfg.synthesize > 0) {
    paths = write_synthetic_corpus(cfg.corpus_dir, cfg.synthesize, cfg.seed);
  }
  const auto pairs = pair_corpus(paths, cfg.seed);

  ExperimentResult result;
  const std::array<std::pair<ScaleSpec, bool>, 2> scales = {
      std::pair{cfg.attack_scale, true}, std::pair{cfg.off_scale, false}};

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [carrier_path, small_path] = pairs[p];
    PreparedPair prepared{Image::filled(1, 1, 1, 0), Image::filled(1, 1, 1, 0),
                          {Image::filled(1, 1, 1, 0), {}}};
    try {
      prepared = prepare_pair(load_image(carrier_path), load_image(small_path), cfg);
    } catch (const Error& e) {
      result.failures.push_back("pair " + std::to_string(p) + ": " + e.what());
      continue;
    }
    for (const auto& [scale, at_attack] : scales) {
      const Image big_ref = resize(prepared.carrier, scale, ResizePolicy::vulnerable());
      const Image small_ref = resize(prepared.small, scale, ResizePolicy::vulnerable());
      for (Condition condition : cfg.conditions) {
        const Image& input = is_attacked(condition) ? prepared.attack.combined : prepared.carrier;
        const Image seen = resize(input, scale, policy_for(condition));
        PairRecord record;
        record.pair = p;
        record.carrier = carrier_path.string();
        record.small = small_path.string();
        record.condition = condition;
        record.scale = scale;
        record.at_attack_scale = at_attack;
        record.big = compare(seen, big_ref);
        record.small_similarity = compare(seen, small_ref);
        result.records.push_back(std::move(record));
      }
    }
  }

  for (const auto& [scale, at_attack] : scales) {
    for (Condition condition : cfg.conditions) {
      std::vector<SimilarityReport> big;
      std::vector<SimilarityReport> small;
      std::size_t big_wins = 0;
      for (const PairRecord& r : result.records) {
        if (r.condition != condition || r.at_attack_scale != at_attack) continue;
        big.push_back(r.big);
        small.push_back(r.small_similarity);
        big_wins += r.big.ncc > r.small_similarity.ncc ? 1 : 0;
      }
      ConditionResult c;
      c.condition = condition;
      c.scale = scale;
      c.at_attack_scale = at_attack;
      c.n = big.size();
      c.big_similarity = summarize(big);
      c.small_similarity = summarize(small);
      c.big_wins_rate =
          c.n == 0 ? 0.0 : static_cast<double>(big_wins) / static_cast<double>(c.n);
      result.conditions.push_back(c);
    }
  }
  return result;
}

void write_records(std::ostream& out, const ExperimentResult& result) {
  for (const PairRecord& r : result.records) {
    const nlohmann::json line = {{"type", "pair"},
                                 {"pair", r.pair},
                                 {"carrier", r.carrier},
                                 {"small", r.small},
                                 {"condition", to_string(r.condition)},
                                 {"scale", r.scale.to_string()},
                                 {"role", r.at_attack_scale ? "attack" : "off"},
                                 {"big", to_json(r.big)},
                                 {"small_similarity", to_json(r.small_similarity)}};
    out << line.dump() << '\n';
  }
  for (const ConditionResult& c : result.conditions) {
    const nlohmann::json line = {{"type", "condition"},
                                 {"condition", to_string(c.condition)},
                                 {"scale", c.scale.to_string()},
                                 {"role", c.at_attack_scale ? "attack" : "off"},
                                 {"n", c.n},
                                 {"big_wins_rate", c.big_wins_rate},
                                 {"big", summary_json(c.big_similarity)},
                                 {"small_similarity", summary_json(c.small_similarity)}};
    out << line.dump() << '\n';
  }
  for (const std::string& f : result.failures) {
    out << nlohmann::json{{"type", "failure"}, {"message", f}}.dump() << '\n';
  }
}

std::string render_summary(const ExperimentResult& result, const ExperimentConfig& cfg) {
  auto find = [&](Condition c, bool at_attack) -> const ConditionResult* {
    for (const ConditionResult& r : result.conditions) {
      if (r.condition == c && r.at_attack_scale == at_attack) return &r;
    }
    return nullptr;
  };
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-22s %-6s | %-30s | %-30s\n", "Images", "Labels",
                ("attack " + cfg.attack_scale.to_string() + ": exact psnr ncc").c_str(),
                ("off " + cfg.off_scale.to_string() + ": exact psnr ncc").c_str());
  out << line << std::string(96, '-') << '\n';
  for (Condition c : {Condition::kCleanVulnerable, Condition::kAttackedVulnerable,
                      Condition::kCleanAntialiased, Condition::kAttackedAntialiased}) {
    const ConditionResult* at = find(c, true);
    const ConditionResult* off = find(c, false);
    if (at == nullptr && off == nullptr) continue;
    for (bool big : {true, false}) {
      std::string cells[2];
      const ConditionResult* parts[2] = {at, off};
      for (int k = 0; k < 2; ++k) {
        if (parts[k] == nullptr) {
          cells[k] = "-";
          continue;
        }
        const MetricSummary& m = big ? parts[k]->big_similarity : parts[k]->small_similarity;
        char cell[64];
        std::snprintf(cell, sizeof(cell), "%5.3f %8s %6.3f", m.exact_rate,
                      format_db(m.psnr_median).c_str(), m.ncc_median);
        cells[k] = cell;
      }
      std::snprintf(line, sizeof(line), "%-22s %-6s | %-30s | %-30s\n",
                    big ? row_group_label(c) : "", big ? "Big" : "Small", cells[0].c_str(),
                    cells[1].c_str());
      out << line;
    }
  }
  const std::size_t n = result.conditions.empty() ? 0 : result.conditions.front().n;
  out << "pairs: " << n << ", skipped: " << result.failures.size()
      << " (medians; exact = fraction bit-identical to reference)\n";
  return out.str();
}

}  // namespace scaleguard
