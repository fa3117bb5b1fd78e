// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scaleguard/attack.hpp"
#include "scaleguard/detect.hpp"
#include "scaleguard/errors.hpp"
#include "scaleguard/harness.hpp"
#include "scaleguard/image_io.hpp"
#include "scaleguard/metrics.hpp"
#include "scaleguard/records.hpp"
#include "scaleguard/resize.hpp"

namespace scaleguard::cli {
namespace {

namespace fs = std::filesystem;

struct AttackArgs {
  std::string carrier;
  std::vector<std::string> embeds;
  std::string out;
  std::string report;
  bool fit = false;
};

struct ResizeArgs {
  std::string in;
  std::string size;
  std::string policy = "vulnerable";
  double step_limit = 2.0;
  std::string out;
};

struct DetectArgs {
  std::string in;
  double threshold = kDefaultDetectionThreshold;
  std::string spectrum_out;
};

struct ProbeArgs {
  std::string size;
  std::string target;
  std::string pixel;
  std::string policy = "vulnerable";
  std::string out;
};

struct VerifyArgs {
  std::string combined;
  std::string small;
  std::string size;
};

struct BenchArgs {
  std::string config;
  std::string corpus;
  std::string records;
  std::string summary;
  std::uint64_t seed = 0;
};

// Refuses to write over any of the inputs.
void check_output(const std::string& out, std::initializer_list<std::string> inputs) {
  std::error_code ec;
  for (const std::string& in : inputs) {
    if (!in.empty() && fs::equivalent(out, in, ec)) {
      throw InvalidArgument("output " + out + " would overwrite input " + in);
    }
  }
}

// "path:WxH", split at the last colon so paths may contain colons.
Embed parse_embed(const std::string& arg, const Image& carrier, bool fit) {
  const auto colon = arg.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw InvalidArgument("--embed expects PATH:WxH, got '" + arg + "'");
  }
  const ScaleSpec at = ScaleSpec::parse(arg.substr(colon + 1));
  Image small = load_image(arg.substr(0, colon));
  if (fit && (small.width() != at.width || small.height() != at.height)) {
    small = resize(small, at, ResizePolicy::vulnerable());
  }
  if (fit && small.channels() != carrier.channels()) {
    std::vector<std::uint8_t> samples;
    const auto s = small.samples();
    if (carrier.channels() == 3) {
      for (std::uint8_t v : s) samples.insert(samples.end(), 3, v);
    } else {
      for (std::size_t k = 0; k < small.pixel_count(); ++k) {
        const double y = 0.299 * s[3 * k] + 0.587 * s[3 * k + 1] + 0.114 * s[3 * k + 2];
        samples.push_back(static_cast<std::uint8_t>(std::lround(y)));
      }
    }
    small = Image(small.width(), small.height(), carrier.channels(), std::move(samples));
  }
  return {std::move(small), at};
}

std::pair<int, int> parse_pixel(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("--pixel expects i,j");
  int col = 0;
  int row = 0;
  const char* end = text.data() + text.size();
  const auto a = std::from_chars(text.data(), text.data() + comma, col);
  const auto b = std::from_chars(text.data() + comma + 1, end, row);
  if (a.ec != std::errc() || a.ptr != text.data() + comma || b.ec != std::errc() ||
      b.ptr != end) {
    throw InvalidArgument("--pixel expects i,j, got '" + text + "'");
  }
  return {col, row};
}

int do_attack(const AttackArgs& a, std::ostream& out) {
  std::vector<std::string> inputs = {a.carrier};
  for (const std::string& e : a.embeds) inputs.push_back(e.substr(0, e.rfind(':')));
  for (const std::string& in : inputs) check_output(a.out, {in});
  if (!a.report.empty()) for (const std::string& in : inputs) check_output(a.report, {in});

  EmbedPlan plan{load_image(a.carrier), {}};
  for (const std::string& e : a.embeds) plan.embeds.push_back(parse_embed(e, plan.carrier, a.fit));
  const AttackResult result = generate_attack(plan);
  save_image(result.combined, a.out);

  nlohmann::json record = to_json(result.report);
  record["out"] = a.out;
  if (!a.report.empty()) {
    std::ofstream rep(a.report);
    if (!(rep << record.dump() << '\n')) throw IoError("cannot write " + a.report);
  }
  out << record.dump() << '\n';
  return kOk;
}

int do_resize(const ResizeArgs& a, std::ostream& out) {
  check_output(a.out, {a.in});
  ResizePolicy policy = ResizePolicy::parse(a.policy);
  if (policy.mode == ResizeMode::kMultiStep) policy.step_shrink_limit = a.step_limit;
  const ScaleSpec spec = ScaleSpec::parse(a.size);
  const Image img = load_image(a.in);
  save_image(resize(img, spec, policy), a.out);
  out << nlohmann::json{{"in", a.in},
                        {"out", a.out},
                        {"from", ScaleSpec::of(img).to_string()},
                        {"size", spec.to_string()},
                        {"policy", policy.name()}}
             .dump()
      << '\n';
  return kOk;
}

int do_detect(const DetectArgs& a, std::ostream& out) {
  if (!a.spectrum_out.empty()) check_output(a.spectrum_out, {a.in});
  const Image img = load_image(a.in);
  const DetectionReport report = detect(img, a.threshold);
  if (!a.spectrum_out.empty()) save_image(windowed_spectrum(img).render_log(), a.spectrum_out);
  out << to_json(report, a.in).dump() << '\n';
  return report.verdict == Verdict::kAttacked ? kAttackDetected : kOk;
}

int do_probe(const ProbeArgs& a, std::ostream& out) {
  const ScaleSpec source = ScaleSpec::parse(a.size);
  const ScaleSpec target = ScaleSpec::parse(a.target);
  const auto [col, row] = parse_pixel(a.pixel);
  const PixelCoord probe(col, row, target.width, target.height);
  const ContributionMap map = contribution_map(source, target, probe, ResizePolicy::parse(a.policy));
  save_image(map.render(), a.out);
  out << nlohmann::json{{"out", a.out},
                        {"support", map.support()},
                        {"max_weight", map.max_weight()},
                        {"total", map.total()}}
             .dump()
      << '\n';
  return kOk;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  const ScaleSpec spec = ScaleSpec::parse(a.size);
  const Image combined = load_image(a.combined);
  const Image small = load_image(a.small);
  if (small.width() != spec.width || small.height() != spec.height) {
    throw DimensionMismatch("small image is " + ScaleSpec::of(small).to_string() +
                            ", expected " + spec.to_string());
  }
  const SimilarityReport report =
      compare(resize(combined, spec, ResizePolicy::vulnerable()), small);
  nlohmann::json record = to_json(report);
  record["size"] = spec.to_string();
  out << record.dump() << '\n';
  return report.exact ? kOk : kMismatch;
}

int do_bench(const BenchArgs& a, bool seed_given, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = load_config(a.config);
  if (!a.corpus.empty()) cfg.corpus_dir = a.corpus;
  if (!a.records.empty()) cfg.records_path = a.records;
  if (!a.summary.empty()) cfg.summary_path = a.summary;
  if (seed_given) cfg.seed = a.seed;
  validate(cfg);

  const ExperimentResult result = run_experiment(cfg);
  for (const std::string& f : result.failures) err << "skipped " << f << '\n';

  if (cfg.records_path.empty()) {
    write_records(out, result);
  } else {
    std::ofstream file(cfg.records_path, std::ios::binary);
    write_records(file, result);
    if (!file) throw IoError("cannot write " + cfg.records_path.string());
  }
  const std::string summary = render_summary(result, cfg);
  if (cfg.summary_path.empty()) {
    err << summary;
  } else {
    std::ofstream file(cfg.summary_path, std::ios::binary);
    if (!(file << summary)) throw IoError("cannot write " + cfg.summary_path.string());
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Image scaling attack toolkit: embed, resize, detect, probe, verify, bench",
               "scaleguard"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Hide images that appear on downscaling");
  attack_cmd->add_option("--carrier", attack.carrier, "Carrier image")->required();
  attack_cmd->add_option("--embed", attack.embeds, "PATH:WxH, repeatable, applied in order")
      ->required();
  attack_cmd->add_option("--out", attack.out, "Combined image (.png, .ppm, .pgm)")->required();
  attack_cmd->add_option("--report", attack.report, "Also write the embed report here");
  attack_cmd->add_flag("--fit", attack.fit,
                       "Stretch each embed to its WxH and match carrier channels");

  ResizeArgs rs;
  auto* resize_cmd = app.add_subcommand("resize", "Resize an image");
  resize_cmd->add_option("--in", rs.in, "Input image")->required();
  resize_cmd->add_option("--size", rs.size, "Target WxH")->required();
  resize_cmd->add_option("--policy", rs.policy, "vulnerable | antialias | multistep")
      ->capture_default_str();
  resize_cmd->add_option("--step-limit", rs.step_limit, "Per-pass shrink limit for multistep")
      ->capture_default_str();
  resize_cmd->add_option("--out", rs.out, "Output image")->required();

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Look for a scaling-attack lattice; exit 4 if found");
  detect_cmd->add_option("--in", det.in, "Input image")->required();
  detect_cmd->add_option("--threshold", det.threshold, "Score above which the image is flagged")
      ->capture_default_str();
  detect_cmd->add_option("--spectrum-out", det.spectrum_out, "Write log-magnitude spectrum PNG");

  ProbeArgs pr;
  auto* probe_cmd = app.add_subcommand("probe", "Map which source pixels feed one output pixel");
  probe_cmd->add_option("--size", pr.size, "Source WxH")->required();
  probe_cmd->add_option("--target", pr.target, "Target WxH")->required();
  probe_cmd->add_option("--pixel", pr.pixel, "Output pixel as col,row")->required();
  probe_cmd->add_option("--policy", pr.policy, "vulnerable | antialias | multistep")
      ->capture_default_str();
  probe_cmd->add_option("--out", pr.out, "Contribution map PNG")->required();

  VerifyArgs ver;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check that a vulnerable resize reveals the small image");
  verify_cmd->add_option("--combined", ver.combined, "Combined image")->required();
  verify_cmd->add_option("--small", ver.small, "Expected small image")->required();
  verify_cmd->add_option("--size", ver.size, "Reveal WxH")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the four-condition experiment");
  bench_cmd->add_option("--config", bench.config, "key = value config file")->required();
  bench_cmd->add_option("--corpus", bench.corpus, "Override corpus_dir");
  bench_cmd->add_option("--records", bench.records, "Override records path");
  bench_cmd->add_option("--summary", bench.summary, "Override summary path");
  auto* seed_opt = bench_cmd->add_option("--seed", bench.seed, "Override seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*attack_cmd) return do_attack(attack, out);
    if (*resize_cmd) return do_resize(rs, out);
    if (*detect_cmd) return do_detect(det, out);
    if (*probe_cmd) return do_probe(pr, out);
    if (*verify_cmd) return do_verify(ver, out);
    if (*bench_cmd) return do_bench(bench, seed_opt->count() > 0, out, err);
  } catch (const PlanError& e) {
    err << "error: " << e.what() << '\n';
    return kPlan;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace scaleguard::cli
