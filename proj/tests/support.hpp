#ifndef NEURONPG_TESTS_SUPPORT_HPP
#define NEURONPG_TESTS_SUPPORT_HPP

// Shared oracles and harnesses for the unit tests and the acceptance binary.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neuronpg/policy.hpp"
#include "neuronpg/rng.hpp"

namespace neuronpg::test_support {

/// O(T^2) direct sum: values[i] = sum_{t >= i} gamma^(t - i) r[t].
inline std::vector<double> direct_discounted(const std::vector<double>& r, double gamma) {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double acc = 0.0;
    for (std::size_t t = i; t < r.size(); ++t) acc += std::pow(gamma, static_cast<double>(t - i)) * r[t];
    out[i] = acc;
  }
  return out;
}

struct BanditSetup {
  double optimum = 2.0;
  double noise_sd = 0.1;
  double w_init = 0.0;
  PolicyParams policy{0.8, 0.3, 0.05, 0.0};
  std::size_t epochs = 500;
  std::size_t bins = 200;
};

/// Scalar synthetic bandit: every bin scores its sampled weight with
/// -(w - optimum)^2 + Normal(0, noise_sd^2), centered update per epoch.
/// Returns the final center.
inline double run_bandit(std::uint64_t seed, const BanditSetup& b = {}) {
  auto pol = SynapsePolicy::learnable(b.w_init, b.policy);
  std::vector<double> w(b.bins), v(b.bins);
  for (std::size_t e = 0; e < b.epochs; ++e) {
    Stream explore(seed, Purpose::Bench, e, 0);
    Stream noise(seed, Purpose::Bench, e, 1);
    for (std::size_t t = 0; t < b.bins; ++t) {
      w[t] = sample_weight(pol, explore);
      const double d = w[t] - b.optimum;
      v[t] = -d * d + b.noise_sd * noise.normal();
    }
    pol.w0 = update_center(pol, w, v, UpdateMode::centered).w0;
  }
  return pol.w0;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("neuronpg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace neuronpg::test_support

#endif  // NEURONPG_TESTS_SUPPORT_HPP
