// neuronpg: batch runner for the per-neuron policy-gradient experiments.
//
//   neuronpg run    --config FILE [--seed S] [--out DIR]
//   neuronpg sweep  --config FILE --seeds S1..S2 [--jobs J] [--out DIR]
//   neuronpg report --run DIR
//
// Exit status: 0 success, 1 configuration error, 2 runtime or I/O error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "neuronpg/neuronpg.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-neuron policy-gradient learning in recurrent spiking networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", neuronpg::kVersion);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string seeds_text;
  unsigned jobs = 1;
  std::string run_dir;

  auto* run = app.add_subcommand("run", "Run one seeded experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory (default: config output_dir)");

  auto* sweep = app.add_subcommand("sweep", "Run a range of seeds; one subdirectory per seed");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--seeds", seeds_text, "Seed range S1..S2 (inclusive)")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Root output directory (default: config output_dir)");

  auto* report = app.add_subcommand("report", "Print summary statistics for a run directory");
  report->add_option("--run", run_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      auto config = neuronpg::load_config(config_path);
      if (seed) config.seed = *seed;
      const std::filesystem::path dir = out_dir.value_or(config.output_dir);
      const auto result = neuronpg::run_and_emit(config, dir);
      std::cout << "wrote " << result.metrics.size() << " epochs to " << dir.string() << "\n";
    } else if (*sweep) {
      const auto config = neuronpg::load_config(config_path);
      const auto seeds = neuronpg::parse_seed_range(seeds_text);
      const std::filesystem::path root = out_dir.value_or(config.output_dir);
      neuronpg::run_sweep(config, seeds, jobs, root);
      std::cout << "wrote " << seeds.size() << " runs under " << root.string() << "\n";
    } else if (*report) {
      std::cout << neuronpg::report_run(run_dir);
    }
  } catch (const neuronpg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
