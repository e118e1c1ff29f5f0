#ifndef NEURONPG_RNG_HPP
#define NEURONPG_RNG_HPP

// Counter-based random streams.
//
// Every random draw in a run comes from a Stream identified by
// (seed, purpose, epoch, a, b). The stream key is obtained by folding those
// five integers through the SplitMix64 finalizer; draw k of a stream is the
// finalizer applied to key + golden*(k+1). Draws for one synapse or neuron
// therefore never depend on how many draws any other stream consumed, which
// keeps schedules and parallel evaluation from changing results.
//
//   fmix(z)        : SplitMix64 output function
//   combine(h, v)  = fmix(h + golden * (v + 1))
//   key            = combine(combine(combine(combine(fmix(seed), purpose), epoch), a), b)
//   bits(k)        = fmix(key + golden * (k + 1))
//   uniform        = (bits >> 11) * 2^-53                      [1 draw, in [0,1)]
//   normal         = sqrt(-2 ln(1-u1)) * cos(2 pi u2)          [2 draws]
//   poisson(rate)  = chop-down inversion, one uniform per chunk of at most
//                    kPoissonChunk mean; rate 0 still consumes one draw.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace neuronpg {

enum class Purpose : std::uint64_t {
  InitWeights = 1,
  EpochMeta = 2,
  WeightNoise = 3,
  Spikes = 4,
  Encoders = 5,
  Bench = 6,  // test harnesses and synthetic problems
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t fmix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
  return fmix(h + kGolden * (v + 1));
}

}  // namespace detail

inline constexpr double kPoissonChunk = 500.0;

class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr Stream(std::uint64_t seed, Purpose purpose, std::uint64_t epoch,
                   std::uint64_t a = 0, std::uint64_t b = 0) noexcept
      : key_(detail::combine(
            detail::combine(
                detail::combine(
                    detail::combine(detail::fmix(seed),
                                    static_cast<std::uint64_t>(purpose)),
                    epoch),
                a),
            b)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return detail::fmix(key_ + detail::kGolden * counter_);
  }

  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t draws() const noexcept { return counter_; }
  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

namespace detail {

inline std::uint64_t poisson_inversion(double rate, double u) {
  double p = std::exp(-rate);
  double cdf = p;
  std::uint64_t k = 0;
  const double k_cap = rate + 40.0 * std::sqrt(rate) + 40.0;
  while (u > cdf && static_cast<double>(k) < k_cap) {
    ++k;
    p *= rate / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

}  // namespace detail

/// Poisson draw with mean `rate`. Consumes max(1, ceil(rate / 500)) uniforms.
inline std::uint64_t poisson(double rate, Stream& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("poisson: rate must be finite and >= 0");
  }
  if (rate <= kPoissonChunk) {
    return detail::poisson_inversion(rate, rng.uniform());
  }
  const auto chunks = static_cast<std::uint64_t>(std::ceil(rate / kPoissonChunk));
  const double part = rate / static_cast<double>(chunks);
  std::uint64_t total = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    total += detail::poisson_inversion(part, rng.uniform());
  }
  return total;
}

}  // namespace neuronpg

#endif  // NEURONPG_RNG_HPP
