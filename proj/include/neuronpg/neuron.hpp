#ifndef NEURONPG_NEURON_HPP
#define NEURONPG_NEURON_HPP

// Single-compartment rate neuron with Poisson spike counts, and one-bin
// synchronous integration of a recurrent network.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "neuronpg/rng.hpp"

namespace neuronpg {

using SpikeCount = std::uint64_t;

struct NeuronParams {
  double v_rest = 0.0;
  double tau_leak = 2.0;   // bins
  double r_max = 4.0;      // expected spikes per bin at saturation
  double gain = 2.0;       // sigmoid slope
  double v_half = 1.0;     // potential at half-maximal rate

  void validate() const {
    if (!(tau_leak > 0.0)) throw std::invalid_argument("neuron: tau_leak must be > 0");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
      throw std::invalid_argument("neuron: r_max must be finite and > 0");
    if (!(gain > 0.0) || !std::isfinite(gain))
      throw std::invalid_argument("neuron: gain must be finite and > 0");
    if (!std::isfinite(v_rest) || !std::isfinite(v_half))
      throw std::invalid_argument("neuron: v_rest and v_half must be finite");
  }

  /// Per-bin multiplicative leak factor exp(-1/tau_leak).
  double leak_factor() const noexcept { return std::exp(-1.0 / tau_leak); }
};

struct NeuronState {
  double v = 0.0;
  SpikeCount spikes = 0;

  static NeuronState at_rest(const NeuronParams& p) noexcept { return {p.v_rest, 0}; }
};

/// Dense signed weights, rows are postsynaptic network neurons, columns are
/// presynaptic sources: network neurons first, then external sources.
/// Self-connections (column i of row i) are held at exactly zero.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t n_network, std::size_t n_external)
      : n_network_(n_network),
        n_external_(n_external),
        w_(n_network * (n_network + n_external), 0.0) {}

  std::size_t n_network() const noexcept { return n_network_; }
  std::size_t n_external() const noexcept { return n_external_; }
  std::size_t n_sources() const noexcept { return n_network_ + n_external_; }

  double operator()(std::size_t post, std::size_t pre) const noexcept {
    return w_[post * n_sources() + pre];
  }

  double at(std::size_t post, std::size_t pre) const {
    check(post, pre);
    return (*this)(post, pre);
  }

  void set(std::size_t post, std::size_t pre, double value) {
    check(post, pre);
    if (post == pre && value != 0.0) {
      throw std::invalid_argument("WeightMatrix: self-connection weight must stay 0");
    }
    w_[post * n_sources() + pre] = value;
  }

  std::span<const double> row(std::size_t post) const noexcept {
    return {w_.data() + post * n_sources(), n_sources()};
  }

  std::span<const double> data() const noexcept { return w_; }

  static bool is_self(std::size_t post, std::size_t pre) noexcept { return post == pre; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  void check(std::size_t post, std::size_t pre) const {
    if (post >= n_network_ || pre >= n_sources()) {
      throw std::out_of_range("WeightMatrix index (" + std::to_string(post) + ", " +
                              std::to_string(pre) + ") out of range");
    }
  }

  std::size_t n_network_ = 0;
  std::size_t n_external_ = 0;
  std::vector<double> w_;
};

/// r_max / (1 + exp(-gain (v - v_half))).
inline double firing_rate(double v, const NeuronParams& p) noexcept {
  return p.r_max / (1.0 + std::exp(-p.gain * (v - p.v_half)));
}

inline SpikeCount sample_spike_count(double rate, Stream& rng) {
  return poisson(rate, rng);
}

/// Leak toward rest, then add synaptic drive and external current.
inline double integrate_potential(double v, const NeuronParams& p, double synaptic_drive,
                                  double external_current) noexcept {
  return p.v_rest + (v - p.v_rest) * p.leak_factor() + synaptic_drive + external_current;
}

inline NeuronState integrate_bin(const NeuronState& state, const NeuronParams& p,
                                 double synaptic_drive, double external_current,
                                 Stream& rng) {
  NeuronState next;
  next.v = integrate_potential(state.v, p, synaptic_drive, external_current);
  next.spikes = sample_spike_count(firing_rate(next.v, p), rng);
  return next;
}

/// Drive onto `post` from previous-bin network spikes and current-bin external
/// source counts.
inline double synaptic_drive(const WeightMatrix& w, std::size_t post,
                             std::span<const NeuronState> states,
                             std::span<const SpikeCount> external_counts) noexcept {
  const auto row = w.row(post);
  double drive = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j].spikes != 0) drive += row[j] * static_cast<double>(states[j].spikes);
  }
  const std::size_t n = states.size();
  for (std::size_t e = 0; e < external_counts.size(); ++e) {
    if (external_counts[e] != 0) drive += row[n + e] * static_cast<double>(external_counts[e]);
  }
  return drive;
}

/// One synchronous bin. `rngs[i]` is neuron i's spike stream.
inline std::vector<NeuronState> network_step(std::span<const NeuronState> states,
                                             const WeightMatrix& weights,
                                             std::span<const SpikeCount> external_counts,
                                             std::span<const double> external_current,
                                             std::span<const NeuronParams> params,
                                             std::span<Stream> rngs) {
  const std::size_t n = states.size();
  if (weights.n_network() != n || weights.n_external() != external_counts.size() ||
      external_current.size() != n || params.size() != n || rngs.size() != n) {
    throw std::invalid_argument("network_step: dimension mismatch");
  }
  std::vector<NeuronState> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double drive = synaptic_drive(weights, i, states, external_counts);
    next[i] = integrate_bin(states[i], params[i], drive, external_current[i], rngs[i]);
  }
  return next;
}

}  // namespace neuronpg

#endif  // NEURONPG_NEURON_HPP
