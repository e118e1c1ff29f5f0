#ifndef NEURONPG_ARM_HPP
#define NEURONPG_ARM_HPP

// One-joint arm driven by an antagonist muscle pair, plus the Gaussian-tuned
// encoder populations that report intended and delayed observed angle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neuronpg/neuron.hpp"
#include "neuronpg/rng.hpp"

namespace neuronpg {

struct ArmParams {
  double inertia = 1.0;
  double damping = 0.1;       // fraction of omega lost per bin
  double torque_gain = 0.2;   // torque per unit spike-count difference
  double angle_min = -std::numbers::pi / 2;
  double angle_max = std::numbers::pi / 2;

  void validate() const {
    if (!(inertia > 0.0) || !std::isfinite(inertia)) throw std::invalid_argument("arm: inertia must be > 0");
    if (!(damping >= 0.0 && damping <= 1.0)) throw std::invalid_argument("arm: damping must lie in [0, 1]");
    if (!(torque_gain > 0.0) || !std::isfinite(torque_gain)) throw std::invalid_argument("arm: torque_gain must be > 0");
    if (!(angle_min < angle_max) || !std::isfinite(angle_min) || !std::isfinite(angle_max))
      throw std::invalid_argument("arm: need finite angle_min < angle_max");
  }
};

struct ArmState {
  double theta = 0.0;
  double omega = 0.0;
};

inline double muscle_torque(SpikeCount agonist, SpikeCount antagonist, const ArmParams& p) noexcept {
  return p.torque_gain * (static_cast<double>(agonist) - static_cast<double>(antagonist));
}

/// Semi-implicit damped double integrator with hard stops.
inline ArmState arm_step(const ArmState& s, double torque, const ArmParams& p) noexcept {
  ArmState next;
  next.omega = (1.0 - p.damping) * s.omega + torque / p.inertia;
  const double theta = s.theta + next.omega;
  if (!(theta > p.angle_min)) {
    next.theta = p.angle_min;
    next.omega = 0.0;
  } else if (!(theta < p.angle_max)) {
    // NaN lands here too; it holds the previous angle.
    next.theta = std::isnan(theta) ? std::clamp(s.theta, p.angle_min, p.angle_max) : p.angle_max;
    next.omega = 0.0;
  } else {
    next.theta = theta;
  }
  return next;
}

struct PopulationCode {
  std::vector<double> preferred;
  double width = 0.0;
  double peak_rate = 4.0;

  /// n encoders evenly spaced over [lo, hi] inclusive.
  static PopulationCode evenly_spaced(std::size_t n, double lo, double hi, double width, double peak_rate) {
    if (n < 2) throw std::invalid_argument("population code: need at least 2 encoders");
    PopulationCode code;
    code.preferred.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      code.preferred[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    code.width = width;
    code.peak_rate = peak_rate;
    code.validate();
    return code;
  }

  void validate() const {
    if (!(width > 0.0)) throw std::invalid_argument("population code: width must be > 0");
    if (!(peak_rate >= 0.0) || !std::isfinite(peak_rate))
      throw std::invalid_argument("population code: peak_rate must be finite and >= 0");
    for (std::size_t k = 1; k < preferred.size(); ++k) {
      if (!(preferred[k] > preferred[k - 1]))
        throw std::invalid_argument("population code: preferred angles must be strictly increasing");
    }
  }

  std::size_t size() const noexcept { return preferred.size(); }
};

inline double tuning_response(double theta, double preferred, const PopulationCode& code) noexcept {
  const double d = theta - preferred;
  return code.peak_rate * std::exp(-d * d / (2.0 * code.width * code.width));
}

/// One Poisson count per encoder; `rngs[k]` is encoder k's stream.
inline std::vector<SpikeCount> encode_population(double theta, const PopulationCode& code,
                                                 std::span<Stream> rngs) {
  if (rngs.size() != code.size()) throw std::invalid_argument("encode_population: stream count mismatch");
  std::vector<SpikeCount> out(code.size());
  for (std::size_t k = 0; k < code.size(); ++k) {
    out[k] = poisson(tuning_response(theta, code.preferred[k], code), rngs[k]);
  }
  return out;
}

/// Fixed-length shift register of past angles.
class DelayLine {
 public:
  DelayLine(std::size_t delay, double initial_angle) : buffer_(delay, initial_angle) {}

  std::size_t delay() const noexcept { return buffer_.size(); }
  const std::deque<double>& buffer() const noexcept { return buffer_; }

  /// Pushes theta_now and returns the angle from delay() bins earlier.
  double observe(double theta_now) {
    if (buffer_.empty()) return theta_now;
    buffer_.push_back(theta_now);
    const double out = buffer_.front();
    buffer_.pop_front();
    return out;
  }

 private:
  std::deque<double> buffer_;
};

inline std::pair<double, DelayLine> observe_delayed(DelayLine line, double theta_now) {
  const double out = line.observe(theta_now);
  return {out, std::move(line)};
}

}  // namespace neuronpg

#endif  // NEURONPG_ARM_HPP
