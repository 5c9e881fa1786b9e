// Copyright 2026 The ugsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ugsim/cli.h"

#include <sstream>

#include "gtest/gtest.h"
#include "test_util.h"

namespace ugsim {
namespace {

namespace fs = std::filesystem;
using testing::source_path;
using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, ValidateBundledConfig) {
  auto r = cli({"validate", "-c", source_path("configs/standard_grid.cfg").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("4 patterns, 19 cells per side, 38 cells total"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("pattern D: gpt-4-1106-preview ChainOfThought temperatures "
                       "0.0 0.5 1.0 1.5 (4 cells per side)"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("matches standard grid: yes"), std::string::npos);
  EXPECT_NE(r.out.find("template: ok"), std::string::npos);
}

TEST(CliTest, ValidateFlagsBadConfig) {
  TempDir dir;
  testing::write_file(dir / "bad.cfg",
                      "pattern.D = gpt-4 ChainOfThought 0 2.0\nbackend = mock:equilibrium\n");
  auto r = cli({"validate", "-c", (dir / "bad.cfg").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.out.find("matches standard grid: no"), std::string::npos);
  EXPECT_NE(r.err.find("2.0"), std::string::npos) << r.err;
}

TEST(CliTest, RunRefusesChainOfThoughtAtTwoWithoutOverride) {
  TempDir dir;
  testing::write_file(dir / "cot.cfg",
                      "pattern.D = gpt-4 ChainOfThought 2.0\nbackend = mock:equilibrium\n"
                      "n_agents = 3\n");
  auto refused = cli({"run", "-c", (dir / "cot.cfg").string(), "--out", dir.path().string()});
  EXPECT_EQ(refused.code, kExitConfig);
  EXPECT_NE(refused.err.find("force-cot-t2"), std::string::npos) << refused.err;
  auto forced = cli({"run", "-c", (dir / "cot.cfg").string(), "--out", dir.path().string(),
                     "--force-cot-t2"});
  EXPECT_EQ(forced.code, kExitOk) << forced.err;
}

TEST(CliTest, DryRunMakesNoFiles) {
  TempDir dir;
  auto r = cli({"run", "-c", source_path("configs/standard_grid.cfg").string(), "--dry-run",
                "--out", dir.path().string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("cells (38, 1000 agents each)"), std::string::npos);
  EXPECT_NE(r.out.find("===== prompt: ChainOfThought / responder ====="), std::string::npos);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(CliTest, MockRunIsReproducibleAndAnalyzable) {
  TempDir a;
  TempDir b;
  auto cfg = source_path("configs/pattern_b_mock.cfg").string();
  for (const auto* dir : {&a, &b}) {
    auto r = cli({"run", "-c", cfg, "--out", dir->path().string(), "--n-agents", "50",
                  "--temperature", "0.5,1.0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  auto run_a = a / "pattern_b_equilibrium";
  auto run_b = b / "pattern_b_equilibrium";
  for (const auto& e : fs::directory_iterator(run_a)) {
    auto name = e.path().filename().string();
    if (e.path().extension() != ".jsonl") continue;
    EXPECT_EQ(testing::read_file(e.path()), testing::read_file(run_b / name)) << name;
  }

  auto analyzed = cli({"analyze", "--run", run_a.string(), "--out", (a / "cmp.csv").string()});
  ASSERT_EQ(analyzed.code, kExitOk) << analyzed.err;
  EXPECT_NE(analyzed.out.find("pattern_b_equilibrium,B,gpt-4-1106-preview,ZeroShot,0.5,50,50"),
            std::string::npos)
      << analyzed.out;
  EXPECT_TRUE(fs::exists(a / "cmp.csv"));

  auto report = cli({"report", "--run", run_a.string()});
  ASSERT_EQ(report.code, kExitOk) << report.err;
  EXPECT_NE(report.out.find("wrote 14 files for 2 cells"), std::string::npos) << report.out;

  auto resumed = cli({"resume", run_a.string()});
  EXPECT_EQ(resumed.code, kExitOk) << resumed.err;
  EXPECT_NE(resumed.out.find("complete"), std::string::npos);

  auto again = cli({"run", "-c", cfg, "--out", a.path().string()});
  EXPECT_EQ(again.code, kExitConfig);
}

TEST(CliTest, AnalyzeWithoutRunFails) {
  TempDir dir;
  auto r = cli({"analyze", "--run", dir.path().string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("manifest.json"), std::string::npos) << r.err;
}

TEST(CliTest, UnknownFlagAndMissingSubcommand) {
  EXPECT_EQ(cli({"run", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(CliTest, SynthReferenceMatchesBundledData) {
  auto r = cli({"synth-reference", "--seed", "7", "--n", "1000"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, testing::read_file(source_path("data/synthetic_reference.csv")));
  EXPECT_EQ(cli({"synth-reference", "--n", "5"}).code, kExitConfig);
}

}  // namespace
}  // namespace ugsim
