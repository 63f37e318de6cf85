// Copyright 2026 The DP-LAC Simulator Authors
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

#include "dplac/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace dplac {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunTool(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> Csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "dplac_cli_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    config_ = (dir_ / "task.cfg").string();
    std::ofstream(config_) << "# small task\n"
                              "strategy=dp_lac\n"
                              "rounds=8\n"
                              "privacy.epsilon=8\n"
                              "privacy.q=0.25\n"
                              "partition.num_clients=20\n"
                              "data.num_samples=400\n"
                              "data.num_val=100\n";
  }
  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  std::string config_;
};

TEST_F(CliTest, RunWritesExactlyThreeFiles) {
  const CliResult r = RunTool({"run", config_, "--out", Path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(Path("run"))) {
    names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names,
            std::vector<std::string>({"model.bin", "rounds.csv", "summary.txt"}));
  const std::string summary = Slurp(Path("run/summary.txt"));
  EXPECT_EQ(summary.rfind("# generated ", 0), 0u);
  EXPECT_NE(summary.find("\nsource=hist\n"), std::string::npos);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("a"), "--workers", "1"}).code, 0);
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("b"), "--workers", "4"}).code, 0);
  EXPECT_EQ(Slurp(Path("a/rounds.csv")), Slurp(Path("b/rounds.csv")));
  EXPECT_EQ(Slurp(Path("a/model.bin")), Slurp(Path("b/model.bin")));
  auto body = [](const std::string& s) { return s.substr(s.find('\n')); };
  EXPECT_EQ(body(Slurp(Path("a/summary.txt"))),
            body(Slurp(Path("b/summary.txt"))));
}

TEST_F(CliTest, SeedFlagOverridesConfig) {
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("a")}).code, 0);
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("b"), "--seed", "9"}).code, 0);
  ASSERT_EQ(RunTool({"run", config_, "seed=9", "--out", Path("c")}).code, 0);
  EXPECT_NE(Slurp(Path("a/model.bin")), Slurp(Path("b/model.bin")));
  EXPECT_EQ(Slurp(Path("b/model.bin")), Slurp(Path("c/model.bin")));
}

TEST_F(CliTest, ConfiguredThresholdOverride) {
  const CliResult r = RunTool({"run", config_, "strategy=fixed", "initial_C=8.0",
                           "--out", Path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = Slurp(Path("run/summary.txt"));
  EXPECT_NE(summary.find("\nsource=configured\n"), std::string::npos);
  EXPECT_NE(summary.find("\nC0=8\n"), std::string::npos) << summary;
}

TEST_F(CliTest, MissingFieldIsConfigError) {
  const std::string cfg = Path("bad.cfg");
  std::ofstream(cfg) << "strategy=dp_lac\nrounds=5\nprivacy.epsilon=1\n";
  const CliResult r = RunTool({"run", cfg, "--out", Path("run")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("privacy.q"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad.cfg:4"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(Path("run")));
}

TEST_F(CliTest, RuntimeErrorExitCode) {
  std::ofstream(Path("blocker")) << "x";
  const CliResult r = RunTool({"run", config_, "--out", Path("blocker/sub")});
  EXPECT_EQ(r.code, kExitRuntime) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunTool({}).code, kExitConfig);
  EXPECT_EQ(RunTool({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(RunTool({"run", config_}).code, kExitConfig);  // no --out
  EXPECT_EQ(RunTool({"--help"}).code, 0);
}

TEST_F(CliTest, AccountantSolveEps) {
  const CliResult r = RunTool({"accountant", "solve-eps", "--z", "1", "--q", "1",
                           "--rounds", "1", "--delta", "1e-5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "epsilon=5.30259\n");
}

TEST_F(CliTest, AccountantRoundTrip) {
  const CliResult z = RunTool({"accountant", "solve-z", "--epsilon", "3", "--q",
                           "0.1", "--rounds", "100"});
  ASSERT_EQ(z.code, 0) << z.err;
  ASSERT_EQ(z.out.rfind("z=", 0), 0u);
  const std::string zval = z.out.substr(2, z.out.find('\n') - 2);
  const CliResult e = RunTool({"accountant", "solve-eps", "--z", zval, "--q", "0.1",
                           "--rounds", "100"});
  ASSERT_EQ(e.code, 0);
  const double eps = std::stod(e.out.substr(e.out.find('=') + 1));
  EXPECT_LE(eps, 3.0 * (1 + 1e-5));  // 6-digit z may round down slightly
  EXPECT_GT(eps, 0.95 * 3.0);
}

TEST_F(CliTest, AccountantRejectsBadRanges) {
  EXPECT_EQ(RunTool({"accountant", "solve-eps", "--z", "1", "--q", "1.5"}).code,
            kExitConfig);
  EXPECT_EQ(RunTool({"accountant", "solve-z", "--epsilon", "-1"}).code,
            kExitConfig);
  EXPECT_EQ(RunTool({"accountant", "solve-eps", "--z", "0"}).code, kExitConfig);
  EXPECT_EQ(RunTool({"accountant", "solve-z"}).code, kExitConfig);
  EXPECT_EQ(RunTool({"accountant", "invert"}).code, kExitConfig);
}

TEST_F(CliTest, PartitionWritesShardsAndManifest) {
  const CliResult r = RunTool({"partition", "--synth", "300,3,2,2", "-N", "5",
                           "--alpha", "0.5", "--seed", "4", "--out",
                           Path("p")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 0; i < 5; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "p/shard_%04d.csv", i);
    EXPECT_TRUE(fs::exists(Path(name))) << name;
  }
  const auto manifest = Csv(Slurp(Path("p/manifest.csv")));
  ASSERT_EQ(manifest.size(), 6u);
  EXPECT_EQ(manifest[0], std::vector<std::string>(
                             {"shard", "size", "class_0", "class_1"}));
  std::size_t total = 0;
  for (std::size_t i = 1; i < manifest.size(); ++i) {
    total += std::stoul(manifest[i][1]);
    EXPECT_EQ(std::stoul(manifest[i][1]),
              std::stoul(manifest[i][2]) + std::stoul(manifest[i][3]));
  }
  EXPECT_EQ(total, 300u);

  ASSERT_EQ(RunTool({"partition", "--synth", "300,3,2,2", "-N", "5", "--alpha",
                 "0.5", "--seed", "4", "--out", Path("q")})
                .code,
            0);
  for (const auto& e : fs::directory_iterator(Path("p"))) {
    EXPECT_EQ(Slurp(e.path()),
              Slurp(fs::path(Path("q")) / e.path().filename()));
  }
}

TEST_F(CliTest, PartitionFromFile) {
  ASSERT_EQ(RunTool({"partition", "--synth", "50,2,3,1", "-N", "1", "--out",
                 Path("whole")})
                .code,
            0);
  const CliResult r = RunTool({"partition", "--data", Path("whole/shard_0000.csv"),
                           "-N", "4", "--out", Path("split")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Csv(Slurp(Path("split/manifest.csv"))).size(), 5u);
}

// Histogram of per-shard class-0 shares (ten bins) for a 1000-way split.
TEST_F(CliTest, PartitionClassRatioHistogramIsPinned) {
  ASSERT_EQ(RunTool({"partition", "--synth", "20000,2,2,3", "-N", "1000",
                 "--alpha", "1.0", "--seed", "1", "--out", Path("p")})
                .code,
            0);
  const auto manifest = Csv(Slurp(Path("p/manifest.csv")));
  ASSERT_EQ(manifest.size(), 1001u);
  std::vector<int> bins(10, 0);
  for (std::size_t i = 1; i < manifest.size(); ++i) {
    const double share =
        std::stod(manifest[i][2]) / std::stod(manifest[i][1]);
    ++bins[std::min(9, static_cast<int>(share * 10))];
  }
  EXPECT_EQ(bins, std::vector<int>({103, 83, 100, 100, 78, 123, 113, 93, 98, 109}));
}

TEST_F(CliTest, PartitionErrors) {
  EXPECT_EQ(RunTool({"partition", "-N", "5", "--out", Path("p")}).code,
            kExitConfig);
  EXPECT_EQ(RunTool({"partition", "--synth", "3,1,2,1", "-N", "5", "--out",
                 Path("p")})
                .code,
            kExitConfig);
  EXPECT_EQ(RunTool({"partition", "--synth", "bad", "-N", "5", "--out", Path("p")})
                .code,
            kExitConfig);
}

TEST_F(CliTest, SweepWritesRunsAndTable) {
  const std::vector<std::string> args = {
      "sweep", config_, "strategy=fixed", "--param", "initial_C", "--values",
      "0.1,0.5,1,4,16", "--out"};
  std::vector<std::string> a = args, b = args;
  a.push_back(Path("s1"));
  b.push_back(Path("s2"));
  const CliResult r = RunTool(a);
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 0; i < 5; ++i) {
    EXPECT_TRUE(fs::exists(Path("s1/run_00" + std::to_string(i) + "/rounds.csv")));
  }
  const auto table = Csv(Slurp(Path("s1/sweep.csv")));
  ASSERT_EQ(table.size(), 6u);
  EXPECT_EQ(table[0],
            std::vector<std::string>({"value", "final_acc", "final_C"}));
  EXPECT_EQ(table[3][0], "1");
  EXPECT_EQ(table[3][2], "1");
  ASSERT_EQ(RunTool(b).code, 0);
  EXPECT_EQ(Slurp(Path("s1/sweep.csv")), Slurp(Path("s2/sweep.csv")));
}

TEST_F(CliTest, SweepRejectsBadValueBeforeRunning) {
  const CliResult r = RunTool({"sweep", config_, "--param", "initial_C",
                           "--values", "1,-2", "--out", Path("s")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_FALSE(fs::exists(Path("s")));
}

TEST_F(CliTest, PlotData) {
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("run")}).code, 0);
  const CliResult c = RunTool({"plotdata", Path("run"), "--series", "C"});
  const CliResult s = RunTool({"plotdata", Path("run"), "--series", "sigma"});
  ASSERT_EQ(c.code, 0);
  ASSERT_EQ(s.code, 0);
  const auto cs = Csv(c.out), ss = Csv(s.out);
  ASSERT_EQ(cs.size(), 9u);
  EXPECT_EQ(cs[0], std::vector<std::string>({"round", "C"}));
  std::string summary = Slurp(Path("run/summary.txt"));
  const auto zpos = summary.find("\nz=") + 3;
  const double z = std::stod(summary.substr(zpos, summary.find('\n', zpos)));
  for (std::size_t i = 1; i < cs.size(); ++i) {
    EXPECT_EQ(cs[i][0], std::to_string(i));
    if (i > 1) {
      EXPECT_LE(std::stod(cs[i][1]), std::stod(cs[i - 1][1]));
    }
    EXPECT_NEAR(std::stod(ss[i][1]), z * std::stod(cs[i][1]),
                1e-7 * std::stod(ss[i][1]));
  }
}

TEST_F(CliTest, PlotDataUnknownSeries) {
  ASSERT_EQ(RunTool({"run", config_, "--out", Path("run")}).code, 0);
  const CliResult r = RunTool({"plotdata", Path("run"), "--series", "loss"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("C, v, sigma, acc"), std::string::npos);
  EXPECT_EQ(RunTool({"plotdata", Path("missing"), "--series", "C"}).code,
            kExitConfig);
}

}  // namespace
}  // namespace dplac
