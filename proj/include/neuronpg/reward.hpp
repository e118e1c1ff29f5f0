#ifndef NEURONPG_REWARD_HPP
#define NEURONPG_REWARD_HPP

// Reward construction for one epoch: global task terms (coincidence of two
// spike trains, correlation of two population patterns), the per-spike
// penalty, and their per-neuron combination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "neuronpg/grid.hpp"
#include "neuronpg/neuron.hpp"

namespace neuronpg {

inline constexpr double kSilenceGuard = 1e-9;

struct CoincidenceReward {
  std::size_t i = 0;
  std::size_t j = 1;
};

struct PatternCorrelationReward {
  // Indices into the intended/observed encoder populations; empty means all.
  std::vector<std::size_t> intended;
  std::vector<std::size_t> observed;
  std::size_t window = 20;
};

using GlobalReward = std::variant<CoincidenceReward, PatternCorrelationReward>;

struct RewardGroup {
  std::vector<std::size_t> neurons;
  GlobalReward global;
};

struct RewardSpec {
  GlobalReward global = CoincidenceReward{};
  double spike_penalty = -1.0;
  double global_weight = 1.0;
  std::optional<std::vector<RewardGroup>> decomposition;
};

/// Encoder spike counts feeding the pattern-correlation term (populations x bins).
struct EncoderCounts {
  Grid<SpikeCount> intended;
  Grid<SpikeCount> observed;
};

/// g_t = a_t b_t / Z with Z = (mean(a) + mean(b)) / 2 over the epoch.
/// All zeros when Z < kSilenceGuard.
inline std::vector<double> coincidence_reward_trace(std::span<const SpikeCount> a,
                                                    std::span<const SpikeCount> b) {
  if (a.size() != b.size()) throw std::invalid_argument("coincidence_reward_trace: length mismatch");
  if (a.empty()) throw std::invalid_argument("coincidence_reward_trace: empty trains");
  const double n = static_cast<double>(a.size());
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    sum_a += static_cast<double>(a[t]);
    sum_b += static_cast<double>(b[t]);
  }
  const double z = 0.5 * (sum_a / n + sum_b / n);
  std::vector<double> g(a.size(), 0.0);
  if (!(z >= kSilenceGuard)) return g;
  for (std::size_t t = 0; t < a.size(); ++t) {
    g[t] = static_cast<double>(a[t]) * static_cast<double>(b[t]) / z;
  }
  return g;
}

inline std::vector<double> spike_penalty_trace(std::span<const SpikeCount> counts, double penalty) {
  std::vector<double> out(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) out[t] = penalty * static_cast<double>(counts[t]);
  return out;
}

/// Pearson correlation; 0 when either side has zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[k] - mx, dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  const double r = sxy / std::sqrt(sxx * syy);
  if (!std::isfinite(r)) return 0.0;
  return std::clamp(r, -1.0, 1.0);
}

/// Per-bin correlation between trailing-window summed spike-count patterns of
/// two equally sized populations. Early bins use the available prefix.
inline std::vector<double> pattern_correlation_reward_trace(const Grid<SpikeCount>& intended,
                                                            const Grid<SpikeCount>& observed,
                                                            std::size_t window) {
  if (intended.rows() != observed.rows()) {
    throw std::invalid_argument("pattern_correlation_reward_trace: population size mismatch (" +
                                std::to_string(intended.rows()) + " vs " +
                                std::to_string(observed.rows()) + ")");
  }
  if (intended.cols() != observed.cols()) {
    throw std::invalid_argument("pattern_correlation_reward_trace: bin count mismatch");
  }
  if (window == 0) throw std::invalid_argument("pattern_correlation_reward_trace: window must be >= 1");
  const std::size_t pop = intended.rows();
  const std::size_t bins = intended.cols();
  std::vector<double> g(bins, 0.0);
  std::vector<double> a(pop, 0.0), b(pop, 0.0);
  for (std::size_t t = 0; t < bins; ++t) {
    for (std::size_t k = 0; k < pop; ++k) {
      a[k] += static_cast<double>(intended(k, t));
      b[k] += static_cast<double>(observed(k, t));
      if (t >= window) {
        a[k] -= static_cast<double>(intended(k, t - window));
        b[k] -= static_cast<double>(observed(k, t - window));
      }
    }
    g[t] = pearson(a, b);
  }
  return g;
}

namespace detail {

inline Grid<SpikeCount> select_rows(const Grid<SpikeCount>& src, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return src;
  Grid<SpikeCount> out(idx.size(), src.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= src.rows()) throw std::invalid_argument("reward: encoder index out of range");
    std::copy(src.row(idx[r]).begin(), src.row(idx[r]).end(), out.row(r).begin());
  }
  return out;
}

inline std::vector<double> global_trace(const GlobalReward& global, const Grid<SpikeCount>& counts,
                                        const EncoderCounts* encoders) {
  if (const auto* c = std::get_if<CoincidenceReward>(&global)) {
    if (c->i == c->j) throw std::invalid_argument("reward: coincidence indices must be distinct");
    if (c->i >= counts.rows() || c->j >= counts.rows()) {
      throw std::invalid_argument("reward: coincidence index out of range for " +
                                  std::to_string(counts.rows()) + " neurons");
    }
    return coincidence_reward_trace(counts.row(c->i), counts.row(c->j));
  }
  const auto& p = std::get<PatternCorrelationReward>(global);
  if (encoders == nullptr) throw std::invalid_argument("reward: pattern correlation needs encoder counts");
  return pattern_correlation_reward_trace(select_rows(encoders->intended, p.intended),
                                          select_rows(encoders->observed, p.observed), p.window);
}

}  // namespace detail

/// Checks a decomposition partitions neurons [0, n) disjointly.
inline void validate_decomposition(const std::vector<RewardGroup>& groups, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& g : groups) {
    for (auto i : g.neurons) {
      if (i >= n) throw std::invalid_argument("reward: decomposition neuron " + std::to_string(i) + " out of range");
      if (seen[i]++) throw std::invalid_argument("reward: neuron " + std::to_string(i) + " appears in two groups");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw std::invalid_argument("reward: decomposition misses neuron " + std::to_string(i));
  }
}

/// per_neuron[n][t] = global_weight * g_t(group of n) + spike_penalty * counts[n][t].
inline Grid<double> assemble_reward_trace(const RewardSpec& spec, const Grid<SpikeCount>& counts,
                                          const EncoderCounts* encoders = nullptr) {
  const std::size_t n = counts.rows();
  const std::size_t bins = counts.cols();
  Grid<double> out(n, bins, 0.0);

  auto fill_row = [&](std::size_t i, const std::vector<double>& g) {
    for (std::size_t t = 0; t < bins; ++t) {
      out(i, t) = spec.global_weight * g[t] + spec.spike_penalty * static_cast<double>(counts(i, t));
    }
  };

  if (spec.decomposition) {
    validate_decomposition(*spec.decomposition, n);
    for (const auto& group : *spec.decomposition) {
      const auto g = detail::global_trace(group.global, counts, encoders);
      for (auto i : group.neurons) fill_row(i, g);
    }
  } else {
    const auto g = detail::global_trace(spec.global, counts, encoders);
    for (std::size_t i = 0; i < n; ++i) fill_row(i, g);
  }
  return out;
}

}  // namespace neuronpg

#endif  // NEURONPG_REWARD_HPP
