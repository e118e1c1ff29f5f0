#ifndef NEURONPG_STATS_HPP
#define NEURONPG_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace neuronpg::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Trailing moving average; output has x.size() - window + 1 entries.
inline std::vector<double> moving_average(std::span<const double> x, std::size_t window) {
  std::vector<double> out;
  if (window == 0 || x.size() < window) return out;
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    acc += x[k];
    if (k >= window) acc -= x[k - window];
    if (k + 1 >= window) out.push_back(acc / static_cast<double>(window));
  }
  return out;
}

/// Least-squares slope of y against 0, 1, 2, ...
inline double ls_slope(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double mx = 0.5 * static_cast<double>(n - 1);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = static_cast<double>(k) - mx;
    sxy += dx * (y[k] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace neuronpg::stats

#endif  // NEURONPG_STATS_HPP
