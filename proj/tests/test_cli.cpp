#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "neuronpg/output.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using neuronpg::read_text;
using neuronpg::write_text;
using neuronpg::test_support::scratch_dir;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NEURONPG_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path small_config(const fs::path& dir, const std::string& extra = "") {
  const auto path = dir / "config.json";
  write_text(path, R"({"n_neurons": 3, "n_epochs": 4, "bins_per_epoch": 20, "snapshot_every": 2)" + extra + "}");
  return path;
}

}  // namespace

TEST(Cli, RunWritesAllOutputs) {
  const auto dir = scratch_dir("cli_run");
  const auto cfg = small_config(dir);
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --seed 12 --out " + (dir / "out").string()), 0);
  for (const char* f : {"metrics.csv", "final_weights.csv", "resolved_config.json", "manifest.json",
                        "snapshots/weights_2.csv", "snapshots/weights_4.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  EXPECT_NE(read_text(dir / "out" / "resolved_config.json").find("\"seed\": 12"), std::string::npos);
}

TEST(Cli, RunTwiceIsByteIdentical) {
  const auto dir = scratch_dir("cli_twice");
  const auto cfg = small_config(dir);
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir / "b").string()), 0);
  EXPECT_EQ(read_text(dir / "a/metrics.csv"), read_text(dir / "b/metrics.csv"));
  EXPECT_EQ(read_text(dir / "a/final_weights.csv"), read_text(dir / "b/final_weights.csv"));
}

TEST(Cli, SweepAndReport) {
  const auto dir = scratch_dir("cli_sweep");
  const auto cfg = small_config(dir);
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() + " --seeds 1..3 --jobs 2 --out " + (dir / "s").string()), 0);
  for (int s = 1; s <= 3; ++s) EXPECT_TRUE(fs::exists(dir / "s" / ("seed_" + std::to_string(s)) / "metrics.csv"));
  EXPECT_EQ(run_cli("report --run " + (dir / "s" / "seed_2").string()), 0);
}

TEST(Cli, ConfigErrorsExitOne) {
  const auto dir = scratch_dir("cli_config");
  EXPECT_EQ(run_cli("run --config " + small_config(dir, R"(, "typo_key": 1)").string()), 1);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()), 1);
  write_text(dir / "broken.json", "{ not json");
  EXPECT_EQ(run_cli("run --config " + (dir / "broken.json").string()), 1);
  EXPECT_EQ(run_cli("sweep --config " + small_config(dir).string() + " --seeds 5..2"), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST(Cli, RuntimeErrorsExitTwo) {
  const auto dir = scratch_dir("cli_runtime");
  write_text(dir / "blocker", "x");
  EXPECT_EQ(run_cli("run --config " + small_config(dir).string() + " --out " + (dir / "blocker" / "out").string()), 2);
  EXPECT_EQ(run_cli("report --run " + (dir / "nothing_here").string()), 2);
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(NEURONPG_CONFIGS)) {
    EXPECT_NO_THROW(neuronpg::load_config(entry.path().string())) << entry.path();
  }
}
