#ifndef NEURONPG_EXPERIMENT_HPP
#define NEURONPG_EXPERIMENT_HPP

// Epoch loop and experiment runners. One epoch: for every bin, sample the
// scheduled neurons' weights, build external input (sinusoidal current or
// encoder spikes from the closed arm loop), step the network and, for the
// arm, the plant; afterwards assemble rewards, discount them, and move each
// scheduled synapse's center.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neuronpg/arm.hpp"
#include "neuronpg/config.hpp"
#include "neuronpg/grid.hpp"
#include "neuronpg/neuron.hpp"
#include "neuronpg/policy.hpp"
#include "neuronpg/reward.hpp"
#include "neuronpg/rng.hpp"

namespace neuronpg {

/// Log-uniform draw on [f_min, f_max]: f_min (f_max / f_min)^u.
inline double frequency_from_uniform(double f_min, double f_max, double u) {
  if (!(f_min > 0.0) || !(f_max > f_min)) {
    throw std::invalid_argument("sample_epoch_frequency: need 0 < f_min < f_max");
  }
  if (u <= 0.0) return f_min;
  if (u >= 1.0) return f_max;
  return f_min * std::pow(f_max / f_min, u);
}

inline double sample_epoch_frequency(double f_min, double f_max, Stream& rng) {
  if (!(f_min > 0.0) || !(f_max > f_min)) {
    throw std::invalid_argument("sample_epoch_frequency: need 0 < f_min < f_max");
  }
  return frequency_from_uniform(f_min, f_max, rng.uniform());
}

inline double sinusoid_current(std::size_t t, double amplitude, double frequency, double phase) noexcept {
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * static_cast<double>(t) + phase);
}

/// Off-diagonal network entries ~ N(0, scale^2), external columns ~ N(0, external_scale^2).
/// Entry (i, j) uses its own InitWeights stream.
inline WeightMatrix init_weights(std::size_t n_network, std::size_t n_external, std::uint64_t seed,
                                 double scale, std::optional<double> external_scale = std::nullopt) {
  if (n_network == 0) throw std::invalid_argument("init_weights: need at least one neuron");
  const double ext = external_scale.value_or(scale);
  WeightMatrix w(n_network, n_external);
  for (std::size_t i = 0; i < n_network; ++i) {
    for (std::size_t j = 0; j < n_network + n_external; ++j) {
      if (WeightMatrix::is_self(i, j)) continue;
      const double s = j < n_network ? scale : ext;
      if (s == 0.0) continue;
      Stream rng(seed, Purpose::InitWeights, 0, i, j);
      w.set(i, j, s * rng.normal());
    }
  }
  return w;
}

struct EpochMeta {
  double frequency = 0.0;
  double phase = 0.0;
  double target_angle = 0.0;
};

struct EpochTrace {
  std::uint64_t epoch = 0;
  Grid<SpikeCount> spike_counts;             // N x T
  std::vector<std::size_t> selected;         // neurons that sampled and updated
  std::vector<Grid<double>> sampled_weights; // per selected neuron: sources x T (frozen rows stay at w0)
  Grid<double> reward;                       // N x T
  Grid<double> values;                       // N x T
  EncoderCounts encoders;                    // arm only
  std::vector<double> theta;                 // arm only, angle after each bin
  EpochMeta meta;
  std::size_t guarded_updates = 0;
};

struct MetricsRow {
  std::uint64_t epoch = 0;
  std::vector<double> expected_reward;  // per neuron, mean of reward trace
  double pair_correlation = 0.0;
  std::vector<double> mean_abs_w;       // per neuron, over learnable incoming centers
  std::optional<double> arm_tracking_error;
};

struct RunResult {
  ExperimentConfig config;
  WeightMatrix initial_weights;
  WeightMatrix final_weights;
  std::vector<std::pair<std::uint64_t, WeightMatrix>> weight_snapshots;
  std::vector<MetricsRow> metrics;
  std::vector<EpochMeta> epoch_meta;
  std::vector<std::size_t> guarded_per_epoch;
  std::size_t guarded_updates = 0;
};

/// Learner state carried across epochs: one policy per (post, source) entry.
class Network {
 public:
  explicit Network(const ExperimentConfig& config)
      : config_(config),
        n_(config.n_neurons),
        n_sources_(config.n_neurons + config.n_external()),
        policies_(n_, n_sources_) {
    config_.validate();
    const auto w = init_weights(n_, config.n_external(), config.seed, config.init.scale, config.init.encoder_scale);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_sources_; ++j) {
        const bool frozen = WeightMatrix::is_self(i, j) || j >= n_;
        policies_(i, j) = frozen ? SynapsePolicy::fixed(w(i, j)) : SynapsePolicy::learnable(w(i, j), config.policy);
      }
    }
    for (const auto& [post, pre] : config.frozen) policies_(post, pre) = SynapsePolicy::fixed(policies_(post, pre).w0);
    if (config.experiment == ExperimentKind::arm) {
      const auto& a = config.arm;
      code_ = PopulationCode::evenly_spaced(a.n_encoders, a.plant.angle_min, a.plant.angle_max, a.width, a.peak_rate);
    }
  }

  const ExperimentConfig& config() const noexcept { return config_; }
  std::size_t n_neurons() const noexcept { return n_; }
  std::size_t n_sources() const noexcept { return n_sources_; }
  const Grid<SynapsePolicy>& policies() const noexcept { return policies_; }
  Grid<SynapsePolicy>& policies() noexcept { return policies_; }
  const PopulationCode& population_code() const noexcept { return code_; }

  WeightMatrix centers() const {
    WeightMatrix w(n_, config_.n_external());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_sources_; ++j)
        if (!WeightMatrix::is_self(i, j)) w.set(i, j, policies_(i, j).w0);
    return w;
  }

  /// Mean |w0| over the learnable incoming synapses of neuron i (0 if none).
  double mean_abs_center(std::size_t i) const {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n_sources_; ++j) {
      if (policies_(i, j).frozen) continue;
      sum += std::fabs(policies_(i, j).w0);
      ++count;
    }
    return count ? sum / static_cast<double>(count) : 0.0;
  }

 private:
  ExperimentConfig config_;
  std::size_t n_;
  std::size_t n_sources_;
  Grid<SynapsePolicy> policies_;
  PopulationCode code_;
};

inline EpochMeta draw_epoch_meta(const ExperimentConfig& c, std::uint64_t epoch) {
  Stream rng(c.seed, Purpose::EpochMeta, epoch);
  EpochMeta meta;
  if (c.experiment == ExperimentKind::coincidence) {
    meta.frequency = sample_epoch_frequency(c.input.f_min, c.input.f_max, rng);
    meta.phase = 2.0 * std::numbers::pi * rng.uniform();
  } else {
    const double lo = c.arm.plant.angle_min + c.arm.target_margin;
    const double hi = c.arm.plant.angle_max - c.arm.target_margin;
    meta.target_angle = lo + (hi - lo) * rng.uniform();
  }
  return meta;
}

/// Runs one epoch against `net`, updating the scheduled neurons' centers.
inline EpochTrace run_epoch(Network& net, std::uint64_t epoch) {
  const ExperimentConfig& c = net.config();
  const std::size_t n = net.n_neurons();
  const std::size_t n_src = net.n_sources();
  const std::size_t n_ext = c.n_external();
  const std::size_t bins = c.bins_per_epoch;
  const bool arm = c.experiment == ExperimentKind::arm;
  auto& pol = net.policies();

  EpochTrace trace;
  trace.epoch = epoch;
  trace.meta = draw_epoch_meta(c, epoch);
  trace.selected = select_updating_neurons(epoch, c.schedule, n);
  trace.spike_counts = Grid<SpikeCount>(n, bins, 0);

  std::vector<char> is_selected(n, 0);
  for (auto i : trace.selected) is_selected[i] = 1;

  // Unscheduled neurons hold their centers this epoch.
  for (std::size_t i = 0; i < n; ++i) {
    if (is_selected[i]) continue;
    for (std::size_t j = 0; j < n_src; ++j) pol(i, j).w_cur = pol(i, j).w0;
  }

  struct Sampler {
    std::size_t post, pre, slot;
    Stream rng;
  };
  std::vector<Sampler> samplers;
  trace.sampled_weights.reserve(trace.selected.size());
  for (std::size_t s = 0; s < trace.selected.size(); ++s) {
    const std::size_t i = trace.selected[s];
    trace.sampled_weights.emplace_back(n_src, bins, 0.0);
    for (std::size_t j = 0; j < n_src; ++j) {
      if (pol(i, j).frozen) {
        auto row = trace.sampled_weights.back().row(j);
        std::fill(row.begin(), row.end(), pol(i, j).w0);
        continue;
      }
      samplers.push_back({i, j, s, Stream(c.seed, Purpose::WeightNoise, epoch, i, j)});
    }
  }

  std::vector<Stream> spike_rngs;
  spike_rngs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) spike_rngs.emplace_back(c.seed, Purpose::Spikes, epoch, i);

  std::vector<Stream> intended_rngs, observed_rngs;
  std::optional<DelayLine> delay;
  ArmState plant;
  if (arm) {
    for (std::size_t k = 0; k < c.arm.n_encoders; ++k) {
      intended_rngs.emplace_back(c.seed, Purpose::Encoders, epoch, 0, k);
      observed_rngs.emplace_back(c.seed, Purpose::Encoders, epoch, 1, k);
    }
    trace.encoders.intended = Grid<SpikeCount>(c.arm.n_encoders, bins, 0);
    trace.encoders.observed = Grid<SpikeCount>(c.arm.n_encoders, bins, 0);
    trace.theta.reserve(bins);
    delay.emplace(c.arm.delay, plant.theta);
  }

  WeightMatrix weights(n, n_ext);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n_src; ++j)
      if (!WeightMatrix::is_self(i, j)) weights.set(i, j, pol(i, j).w_cur);

  std::vector<NeuronParams> params(n, c.neuron);
  std::vector<NeuronState> states(n, NeuronState::at_rest(c.neuron));
  std::vector<double> current(n, 0.0);
  std::vector<SpikeCount> external(n_ext, 0);

  for (std::size_t t = 0; t < bins; ++t) {
    for (auto& s : samplers) {
      double w = sample_weight(pol(s.post, s.pre), s.rng);
      if (c.clip) {
        w = std::clamp(w, -c.w_max, c.w_max);
        pol(s.post, s.pre).w_cur = w;
      }
      trace.sampled_weights[s.slot](s.pre, t) = w;
      weights.set(s.post, s.pre, w);
    }

    if (arm) {
      const double observed_theta = delay->observe(plant.theta);
      const auto& code = net.population_code();
      const auto in = encode_population(trace.meta.target_angle, code, intended_rngs);
      const auto obs = encode_population(observed_theta, code, observed_rngs);
      for (std::size_t k = 0; k < c.arm.n_encoders; ++k) {
        external[k] = in[k];
        external[c.arm.n_encoders + k] = obs[k];
        trace.encoders.intended(k, t) = in[k];
        trace.encoders.observed(k, t) = obs[k];
      }
    } else {
      current[0] = sinusoid_current(t, c.input.amplitude, trace.meta.frequency, trace.meta.phase);
    }

    states = network_step(states, weights, external, current, params, spike_rngs);
    for (std::size_t i = 0; i < n; ++i) trace.spike_counts(i, t) = states[i].spikes;

    if (arm) {
      const double torque = muscle_torque(states[c.arm.motor_agonist].spikes,
                                          states[c.arm.motor_antagonist].spikes, c.arm.plant);
      plant = arm_step(plant, torque, c.arm.plant);
      trace.theta.push_back(plant.theta);
    }
  }

  trace.reward = assemble_reward_trace(c.reward, trace.spike_counts, arm ? &trace.encoders : nullptr);
  trace.values = Grid<double>(n, bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = discounted_values(trace.reward.row(i), c.policy.gamma);
    std::copy(v.begin(), v.end(), trace.values.row(i).begin());
  }

  for (std::size_t s = 0; s < trace.selected.size(); ++s) {
    const std::size_t i = trace.selected[s];
    for (std::size_t j = 0; j < n_src; ++j) {
      auto& p = pol(i, j);
      if (p.frozen) continue;
      const auto out = update_center(p, trace.sampled_weights[s].row(j), trace.values.row(i), c.update_mode);
      if (out.guarded) ++trace.guarded_updates;
      p.w0 = c.clip ? std::clamp(out.w0, -c.w_max, c.w_max) : out.w0;
    }
  }
  return trace;
}

inline MetricsRow epoch_metrics(const Network& net, const EpochTrace& trace) {
  const auto& c = net.config();
  const std::size_t n = net.n_neurons();
  const std::size_t bins = c.bins_per_epoch;
  MetricsRow row;
  row.epoch = trace.epoch;
  row.expected_reward.resize(n);
  row.mean_abs_w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double r : trace.reward.row(i)) sum += r;
    row.expected_reward[i] = sum / static_cast<double>(bins);
    row.mean_abs_w[i] = net.mean_abs_center(i);
  }
  std::vector<double> a(bins), b(bins);
  for (std::size_t t = 0; t < bins; ++t) {
    a[t] = static_cast<double>(trace.spike_counts(c.pair.first, t));
    b[t] = static_cast<double>(trace.spike_counts(c.pair.second, t));
  }
  row.pair_correlation = pearson(a, b);
  if (c.experiment == ExperimentKind::arm) {
    double err = 0.0;
    for (double th : trace.theta) err += std::fabs(th - trace.meta.target_angle);
    row.arm_tracking_error = err / static_cast<double>(bins);
  }
  return row;
}

using EpochObserver = std::function<void(const EpochTrace&, const MetricsRow&)>;

inline RunResult run_experiment(const ExperimentConfig& config, const EpochObserver& observer = {}) {
  Network net(config);
  RunResult result;
  result.config = config;
  result.initial_weights = net.centers();
  result.metrics.reserve(config.n_epochs);
  for (std::uint64_t e = 0; e < config.n_epochs; ++e) {
    const auto trace = run_epoch(net, e);
    auto row = epoch_metrics(net, trace);
    if (observer) observer(trace, row);
    result.guarded_updates += trace.guarded_updates;
    result.guarded_per_epoch.push_back(trace.guarded_updates);
    result.epoch_meta.push_back(trace.meta);
    result.metrics.push_back(std::move(row));
    if ((e + 1) % config.snapshot_every == 0) result.weight_snapshots.emplace_back(e + 1, net.centers());
  }
  result.final_weights = net.centers();
  return result;
}

}  // namespace neuronpg

#endif  // NEURONPG_EXPERIMENT_HPP
