#ifndef NEURONPG_SWEEP_HPP
#define NEURONPG_SWEEP_HPP

// Seed sweeps: independent runs, one output subdirectory per seed.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "neuronpg/config.hpp"
#include "neuronpg/experiment.hpp"
#include "neuronpg/output.hpp"

namespace neuronpg {

inline std::filesystem::path seed_dir(const std::filesystem::path& root, std::uint64_t seed) {
  return root / ("seed_" + std::to_string(seed));
}

/// Runs `config` and writes its outputs to `dir`.
inline RunResult run_and_emit(ExperimentConfig config, const std::filesystem::path& dir) {
  config.output_dir = dir.string();
  const auto t0 = std::chrono::steady_clock::now();
  auto result = run_experiment(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_outputs(result, dir, wall);
  return result;
}

/// Runs every seed, `jobs` at a time. Rethrows the first failure after all
/// workers stop.
inline void run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds, unsigned jobs,
                      const std::filesystem::path& out_root) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size()))));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(seeds.size());

  auto worker = [&] {
    for (std::size_t k = next++; k < seeds.size(); k = next++) {
      try {
        ExperimentConfig c = base;
        c.seed = seeds[k];
        run_and_emit(c, seed_dir(out_root, seeds[k]));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Parses "S1..S2" (inclusive) or a single seed.
inline std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("seeds: '" + text + "' is not S or S1..S2");
    }
    return std::stoull(s);
  };
  const auto dots = text.find("..");
  std::vector<std::uint64_t> out;
  if (dots == std::string::npos) {
    out.push_back(parse_one(text));
    return out;
  }
  const auto lo = parse_one(text.substr(0, dots));
  const auto hi = parse_one(text.substr(dots + 2));
  if (hi < lo) throw ConfigError("seeds: empty range '" + text + "'");
  if (hi - lo >= 100000) throw ConfigError("seeds: range '" + text + "' is too large");
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

}  // namespace neuronpg

#endif  // NEURONPG_SWEEP_HPP
