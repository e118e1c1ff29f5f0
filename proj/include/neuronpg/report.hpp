#ifndef NEURONPG_REPORT_HPP
#define NEURONPG_REPORT_HPP

// Summary statistics over an emitted run directory.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "neuronpg/output.hpp"
#include "neuronpg/stats.hpp"

namespace neuronpg {

struct RunSummary {
  std::size_t n_epochs = 0;
  std::size_t n_neurons = 0;
  std::size_t window = 0;
  std::vector<double> reward_first, reward_last;  // per neuron, window means
  double pair_corr_first = 0.0, pair_corr_last = 0.0;
  std::vector<double> abs_w_first, abs_w_last;
  std::size_t rising_neurons = 0;                 // positive slope of smoothed expected reward
  bool has_tracking = false;
  double tracking_first = 0.0, tracking_last = 0.0;
};

inline RunSummary summarize_metrics(const CsvTable& t) {
  RunSummary s;
  s.n_epochs = t.rows.size();
  for (const auto& h : t.header)
    if (h.rfind("expected_reward_", 0) == 0) ++s.n_neurons;
  if (s.n_epochs == 0) return s;
  s.window = std::max<std::size_t>(1, std::min<std::size_t>(100, s.n_epochs / 2));

  auto column = [&](const std::string& name) {
    const auto k = t.column(name);
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& r : t.rows) v.push_back(r[k]);
    return v;
  };
  auto head = [&](const std::vector<double>& v) {
    return stats::mean(std::span<const double>(v).first(s.window));
  };
  auto tail = [&](const std::vector<double>& v) {
    return stats::mean(std::span<const double>(v).last(s.window));
  };
  const std::size_t smooth = std::max<std::size_t>(1, std::min<std::size_t>(20, s.n_epochs / 5));
  for (std::size_t i = 0; i < s.n_neurons; ++i) {
    const auto r = column("expected_reward_" + std::to_string(i));
    s.reward_first.push_back(head(r));
    s.reward_last.push_back(tail(r));
    if (stats::ls_slope(stats::moving_average(r, smooth)) > 0.0) ++s.rising_neurons;
    const auto w = column("mean_abs_w_" + std::to_string(i));
    s.abs_w_first.push_back(head(w));
    s.abs_w_last.push_back(tail(w));
  }
  const auto pc = column("pair_correlation");
  s.pair_corr_first = head(pc);
  s.pair_corr_last = tail(pc);
  const auto tr = column("arm_tracking_error");
  if (!tr.empty() && !std::isnan(tr.front())) {
    s.has_tracking = true;
    s.tracking_first = head(tr);
    s.tracking_last = tail(tr);
  }
  return s;
}

inline std::string format_summary(const RunSummary& s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(4);
  o << "epochs: " << s.n_epochs << "  neurons: " << s.n_neurons << "  window: " << s.window << "\n";
  if (s.n_epochs == 0) return o.str();
  o << "pair correlation: " << s.pair_corr_first << " -> " << s.pair_corr_last << "\n";
  if (s.has_tracking) o << "arm tracking error: " << s.tracking_first << " -> " << s.tracking_last << "\n";
  o << "neurons with rising expected reward: " << s.rising_neurons << "/" << s.n_neurons << "\n";
  o << "neuron  reward_first  reward_last  mean_abs_w_first  mean_abs_w_last\n";
  for (std::size_t i = 0; i < s.n_neurons; ++i) {
    o << i << "  " << s.reward_first[i] << "  " << s.reward_last[i] << "  " << s.abs_w_first[i] << "  "
      << s.abs_w_last[i] << "\n";
  }
  return o.str();
}

inline std::string report_run(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("report: '" + dir.string() + "' is not a directory");
  std::string out;
  if (std::filesystem::exists(dir / "manifest.json")) {
    const auto m = nlohmann::json::parse(read_text(dir / "manifest.json"), nullptr, false);
    if (!m.is_discarded()) {
      out += "seed: " + m.value("seed", nlohmann::json()).dump() +
             "  version: " + m.value("version", std::string("?")) +
             "  guarded updates: " + m.value("guarded_updates", nlohmann::json()).dump() + "\n";
    }
  }
  out += format_summary(summarize_metrics(read_csv(dir / "metrics.csv")));
  return out;
}

}  // namespace neuronpg

#endif  // NEURONPG_REPORT_HPP
