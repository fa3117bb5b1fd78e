// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "scaleguard/cli.hpp"
#include "scaleguard/image_io.hpp"
#include "scaleguard/resize.hpp"
#include "scaleguard/synthetic.hpp"
#include "test_support.hpp"

namespace scaleguard {
namespace {

using testing::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;

  nlohmann::json record() const { return nlohmann::json::parse(out.substr(0, out.find('\n'))); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "scaleguard");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Carrier and two smalls on disk, shared by the tests below.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    save_image(resize(synthesize_scene(1, 500, 400), {2000, 2000}, ResizePolicy::vulnerable()),
               path("carrier.png"));
    save_image(resize(synthesize_scene(2, 400, 300), {299, 299}, ResizePolicy::vulnerable()),
               path("shark.png"));
    save_image(resize(synthesize_scene(3, 400, 300), {224, 224}, ResizePolicy::vulnerable()),
               path("boat.png"));
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static TempDir* dir_;
};

TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, HelpExitsZero) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("attack"), std::string::npos);
}

TEST_F(CliTest, MissingSubcommandOrFlagIsUsageError) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  const Outcome r = run({"attack", "--carrier", path("carrier.png"), "--embed",
                     path("shark.png") + ":299x299"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("--out"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, AttackThenVerify) {
  const Outcome attack = run({"attack", "--carrier", path("carrier.png"), "--embed",
                          path("shark.png") + ":299x299", "--out", path("combined.png"),
                          "--report", path("report.jsonl")});
  ASSERT_EQ(attack.code, cli::kOk) << attack.err;
  const nlohmann::json rec = attack.record();
  EXPECT_EQ(rec["collisions"], 0);
  EXPECT_GT(rec["fraction_perturbed"].get<double>(), 0.0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("report.jsonl"))), rec);

  const Outcome verify = run({"verify", "--combined", path("combined.png"), "--small",
                          path("shark.png"), "--size", "299x299"});
  EXPECT_EQ(verify.code, cli::kOk) << verify.err;
  EXPECT_TRUE(verify.record()["exact"].get<bool>());
}

TEST_F(CliTest, ThreeScaleAttack) {
  ASSERT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":299x299", "--embed", path("boat.png") + ":224x224",
                 "--out", path("three.png")})
                .code,
            cli::kOk);
  EXPECT_EQ(run({"verify", "--combined", path("three.png"), "--small", path("boat.png"),
                 "--size", "224x224"})
                .code,
            cli::kOk);
}

TEST_F(CliTest, AttackErrors) {
  // Embed as large as the carrier violates the plan.
  EXPECT_EQ(run({"attack", "--carrier", path("shark.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("x.png")})
                .code,
            cli::kPlan);
  // Wrong declared size without --fit.
  EXPECT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":300x300", "--out", path("x.png")})
                .code,
            cli::kPlan);
  EXPECT_EQ(run({"attack", "--carrier", path("missing.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("x.png")})
                .code,
            cli::kIo);
  EXPECT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed", path("shark.png"),
                 "--out", path("x.png")})
                .code,
            cli::kUsage);
  // Never writes over an input.
  EXPECT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("carrier.png")})
                .code,
            cli::kUsage);
}

TEST_F(CliTest, AttackFitStretchesEmbed) {
  const Outcome r = run({"attack", "--carrier", path("carrier.png"), "--embed",
                     path("shark.png") + ":150x120", "--fit", "--out", path("fit.png")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
}

TEST_F(CliTest, ResizePolicies) {
  ASSERT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("c2.png")})
                .code,
            cli::kOk);
  ASSERT_EQ(run({"resize", "--in", path("c2.png"), "--size", "299x299", "--out",
                 path("revealed.png")})
                .code,
            cli::kOk);
  EXPECT_EQ(load_image(path("revealed.png")), load_image(path("shark.png")));

  const Outcome aa = run({"resize", "--in", path("c2.png"), "--size", "299x299", "--policy",
                      "antialias", "--out", path("defended.png")});
  ASSERT_EQ(aa.code, cli::kOk);
  EXPECT_EQ(aa.record()["policy"], "antialias");
  EXPECT_NE(load_image(path("defended.png")), load_image(path("shark.png")));

  EXPECT_EQ(run({"resize", "--in", path("c2.png"), "--size", "299x299", "--policy", "multistep",
                 "--step-limit", "1.5", "--out", path("ms.png")})
                .code,
            cli::kOk);

  for (const char* policy : {"vulnerable", "antialias", "multistep"}) {
    ASSERT_EQ(run({"resize", "--in", path("shark.png"), "--size", "299x299", "--policy", policy,
                   "--out", path("same.png")})
                  .code,
              cli::kOk);
    EXPECT_EQ(load_image(path("same.png")), load_image(path("shark.png"))) << policy;
  }

  EXPECT_EQ(run({"resize", "--in", path("c2.png"), "--size", "299x299", "--policy", "bicubic",
                 "--out", path("x.png")})
                .code,
            cli::kUsage);
  EXPECT_EQ(run({"resize", "--in", path("c2.png"), "--size", "299", "--out", path("x.png")}).code,
            cli::kUsage);
  EXPECT_EQ(run({"resize", "--in", path("c2.png"), "--size", "10x10", "--out", path("x.gif")})
                .code,
            cli::kIo);
}

TEST_F(CliTest, DetectExitCodes) {
  ASSERT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("c3.png")})
                .code,
            cli::kOk);
  const Outcome clean = run({"detect", "--in", path("carrier.png")});
  EXPECT_EQ(clean.code, cli::kOk) << clean.out;
  EXPECT_EQ(clean.record()["verdict"], "clean");

  const Outcome attacked = run({"detect", "--in", path("c3.png"), "--spectrum-out", path("spec.png")});
  EXPECT_EQ(attacked.code, cli::kAttackDetected);
  const nlohmann::json rec = attacked.record();
  EXPECT_EQ(rec["verdict"], "attacked");
  EXPECT_EQ(rec["path"], path("c3.png"));
  for (const char* key : {"score", "threshold", "peaks", "inferred_scales"}) {
    EXPECT_TRUE(rec.contains(key)) << key;
  }
  bool found = false;
  for (const auto& s : rec["inferred_scales"]) found |= std::abs(s["width"].get<int>() - 299) <= 1;
  EXPECT_TRUE(found);
  const Image spec = load_image(path("spec.png"));
  EXPECT_EQ(spec.width(), 2000);

  // A huge threshold silences it.
  EXPECT_EQ(run({"detect", "--in", path("c3.png"), "--threshold", "1e12"}).code, cli::kOk);
  EXPECT_EQ(run({"detect", "--in", path("nope.png")}).code, cli::kIo);
  EXPECT_EQ(run({"detect", "--in", path("c3.png"), "--threshold", "abc"}).code, cli::kUsage);
}

TEST_F(CliTest, ProbeExamples) {
  const Outcome v = run({"probe", "--size", "100x100", "--target", "5x5", "--pixel", "2,2",
                     "--policy", "vulnerable", "--out", path("probe_v.png")});
  ASSERT_EQ(v.code, cli::kOk) << v.err;
  EXPECT_EQ(v.record()["support"], 4);
  EXPECT_DOUBLE_EQ(v.record()["max_weight"].get<double>(), 0.25);

  const Outcome a = run({"probe", "--size", "100x100", "--target", "5x5", "--pixel", "2,2",
                     "--policy", "antialias", "--out", path("probe_a.png")});
  ASSERT_EQ(a.code, cli::kOk);
  EXPECT_GT(a.record()["support"].get<int>(), 4);
  EXPECT_LT(a.record()["max_weight"].get<double>(), 0.25);

  const Outcome id = run({"probe", "--size", "9x9", "--target", "9x9", "--pixel", "4,4", "--out",
                      path("probe_i.png")});
  EXPECT_EQ(id.record()["support"], 1);
  EXPECT_DOUBLE_EQ(id.record()["max_weight"].get<double>(), 1.0);

  EXPECT_EQ(run({"probe", "--size", "100x100", "--target", "5x5", "--pixel", "5,0", "--out",
                 path("p.png")})
                .code,
            cli::kUsage);
  EXPECT_EQ(run({"probe", "--size", "100x100", "--target", "5x5", "--pixel", "2;2", "--out",
                 path("p.png")})
                .code,
            cli::kUsage);
}

TEST_F(CliTest, VerifyFailures) {
  ASSERT_EQ(run({"attack", "--carrier", path("carrier.png"), "--embed",
                 path("shark.png") + ":299x299", "--out", path("c4.png")})
                .code,
            cli::kOk);
  ASSERT_EQ(run({"resize", "--in", path("c4.png"), "--size", "1999x1999", "--policy",
                 "antialias", "--out", path("reencoded.png")})
                .code,
            cli::kOk);
  const Outcome broken = run({"verify", "--combined", path("reencoded.png"), "--small",
                          path("shark.png"), "--size", "299x299"});
  EXPECT_NE(broken.code, cli::kOk);
  EXPECT_FALSE(broken.record()["exact"].get<bool>());

  EXPECT_EQ(run({"verify", "--combined", path("c4.png"), "--small", path("shark.png"), "--size",
                 "224x224"})
                .code,
            cli::kUsage);
}

TEST_F(CliTest, BenchIsDeterministic) {
  const std::string corpus = path("corpus");
  std::ofstream(path("bench.cfg")) << "corpus_dir = corpus\n"
                                      "carrier_scale = 400x400\n"
                                      "attack_scale = 100x100\n"
                                      "off_scale = 80x80\n"
                                      "seed = 5\n"
                                      "synthesize = 4\n"
                                      "records = records_a.jsonl\n"
                                      "summary = summary.txt\n";
  ASSERT_EQ(run({"bench", "--config", path("bench.cfg")}).code, cli::kOk);
  ASSERT_EQ(run({"bench", "--config", path("bench.cfg"), "--records", path("records_b.jsonl")})
                .code,
            cli::kOk);
  const std::string a = slurp(path("records_a.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("records_b.jsonl")));
  EXPECT_NE(slurp(path("summary.txt")).find("Antialiased Attacked"), std::string::npos);

  // No records path: records go to stdout.
  std::ofstream(path("stdout.cfg")) << "corpus_dir = corpus\ncarrier_scale = 400x400\n"
                                       "attack_scale = 100x100\noff_scale = 80x80\n";
  const Outcome r = run({"bench", "--config", path("stdout.cfg"), "--seed", "5"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, a);
}

TEST_F(CliTest, BenchBadConfig) {
  std::ofstream(path("bad.cfg")) << "corpus_dir = x\nattack_scale = banana\n";
  const Outcome r = run({"bench", "--config", path("bad.cfg")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("attack_scale"), std::string::npos);
  EXPECT_EQ(run({"bench", "--config", path("absent.cfg")}).code, cli::kIo);
}

}  // namespace
}  // namespace scaleguard
