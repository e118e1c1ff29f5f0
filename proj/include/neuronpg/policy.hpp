#ifndef NEURONPG_POLICY_HPP
#define NEURONPG_POLICY_HPP

// Per-synapse stochastic policy: AR(1) Gaussian weight sampling around a
// learnable center, discounted value estimation over an epoch, and the
// value-weighted center update.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuronpg/rng.hpp"

namespace neuronpg {

inline constexpr double kUpdateGuard = 1e-9;

struct PolicyParams {
  double alpha = 0.9;   // AR(1) persistence, (0, 1)
  double sigma = 0.2;   // innovation s.d.
  double beta = 0.05;   // center step size; 0 turns learning off
  double gamma = 0.9;   // discount, [0, 1)

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("policy: alpha must lie in (0, 1)");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("policy: sigma must be finite and >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("policy: beta must be finite and >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("policy: gamma must lie in [0, 1)");
  }
};

struct SynapsePolicy {
  double w0 = 0.0;
  double w_cur = 0.0;
  double alpha = 0.9;
  double sigma = 0.2;
  double beta = 0.05;
  bool frozen = false;

  static SynapsePolicy learnable(double center, const PolicyParams& p) noexcept {
    return {center, center, p.alpha, p.sigma, p.beta, false};
  }
  static SynapsePolicy fixed(double weight) noexcept {
    return {weight, weight, 0.5, 0.0, 1.0, true};
  }
};

/// One AR(1) step: w = alpha w_prev + (1 - alpha)(w0 + eps), eps ~ N(0, sigma^2).
/// Frozen synapses are left at w0 and draw nothing.
inline double sample_weight(SynapsePolicy& policy, Stream& rng) noexcept {
  if (policy.frozen) {
    policy.w_cur = policy.w0;
    return policy.w0;
  }
  const double eps = policy.sigma * rng.normal();
  policy.w_cur = policy.alpha * policy.w_cur + (1.0 - policy.alpha) * (policy.w0 + eps);
  return policy.w_cur;
}

/// values[t] = sum_{s >= t} gamma^(s - t) rewards[s], by backward recursion.
inline std::vector<double> discounted_values(std::span<const double> rewards, double gamma) {
  if (rewards.empty()) throw std::invalid_argument("discounted_values: empty reward trace");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_values: gamma must lie in [0, 1)");
  std::vector<double> values(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    values[t] = acc;
  }
  return values;
}

enum class UpdateMode { literal, centered };

inline const char* to_string(UpdateMode m) noexcept {
  return m == UpdateMode::literal ? "literal" : "centered";
}

struct UpdateOutcome {
  double w0 = 0.0;
  bool guarded = false;  // denominator fell under kUpdateGuard, update skipped
};

/// New center from one epoch of sampled weights and their values.
///
/// literal:  w0 + beta * sum(V w) / sum(V), skipped when |sum V| < guard.
/// centered: w0 + beta * sum((V - mean V)(w - mean w)) / (sum|V - mean V| + guard),
///           skipped when sum|V - mean V| < guard.
inline UpdateOutcome update_center(const SynapsePolicy& policy,
                                   std::span<const double> sampled_weights,
                                   std::span<const double> values, UpdateMode mode,
                                   double guard = kUpdateGuard) {
  if (policy.frozen) throw std::invalid_argument("update_center: policy is frozen");
  if (sampled_weights.size() != values.size()) {
    throw std::invalid_argument("update_center: length mismatch (" +
                                std::to_string(sampled_weights.size()) + " weights vs " +
                                std::to_string(values.size()) + " values)");
  }
  if (values.size() < 2) throw std::invalid_argument("update_center: need at least 2 bins");

  const std::size_t n = values.size();
  if (mode == UpdateMode::literal) {
    double sum_v = 0.0, sum_vw = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      sum_v += values[t];
      sum_vw += values[t] * sampled_weights[t];
    }
    if (!(std::fabs(sum_v) >= guard)) return {policy.w0, true};
    return {policy.w0 + policy.beta * sum_vw / sum_v, false};
  }

  double mean_v = 0.0, mean_w = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    mean_v += values[t];
    mean_w += sampled_weights[t];
  }
  mean_v /= static_cast<double>(n);
  mean_w /= static_cast<double>(n);
  double cov = 0.0, spread = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double dv = values[t] - mean_v;
    cov += dv * (sampled_weights[t] - mean_w);
    spread += std::fabs(dv);
  }
  if (!(spread >= guard)) return {policy.w0, true};
  return {policy.w0 + policy.beta * cov / (spread + guard), false};
}

struct Schedule {
  enum class Kind { all_simultaneous, round_robin };
  Kind kind = Kind::all_simultaneous;
  std::size_t k = 1;

  static Schedule all() noexcept { return {}; }
  static Schedule round_robin(std::size_t k) noexcept { return {Kind::round_robin, k}; }
};

/// Indices of the learnable neurons that sample and update in this epoch.
/// Round-robin(k) returns (epoch*k + j) mod n for j in [0, k), in that order.
inline std::vector<std::size_t> select_updating_neurons(std::uint64_t epoch_index,
                                                        const Schedule& schedule,
                                                        std::size_t n_learnable) {
  if (n_learnable == 0) throw std::invalid_argument("select_updating_neurons: no learnable neurons");
  std::vector<std::size_t> out;
  if (schedule.kind == Schedule::Kind::all_simultaneous) {
    out.resize(n_learnable);
    for (std::size_t i = 0; i < n_learnable; ++i) out[i] = i;
    return out;
  }
  if (schedule.k == 0 || schedule.k > n_learnable) {
    throw std::invalid_argument("select_updating_neurons: round-robin k=" + std::to_string(schedule.k) +
                                " must lie in [1, " + std::to_string(n_learnable) + "]");
  }
  out.reserve(schedule.k);
  const std::uint64_t n = n_learnable;
  const std::uint64_t base = (epoch_index % n) * (schedule.k % n) % n;
  for (std::size_t j = 0; j < schedule.k; ++j) {
    out.push_back(static_cast<std::size_t>((base + j) % n));
  }
  return out;
}

}  // namespace neuronpg

#endif  // NEURONPG_POLICY_HPP
