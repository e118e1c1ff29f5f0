#ifndef NEURONPG_OUTPUT_HPP
#define NEURONPG_OUTPUT_HPP

// Plain-text run outputs. Doubles are written in shortest round-trip form so
// identical runs produce identical bytes.
//
//   metrics.csv                 epoch, expected_reward_<i>..., pair_correlation,
//                               mean_abs_w_<i>..., arm_tracking_error
//   epoch_meta.csv              epoch, frequency, phase, target_angle, guarded_updates
//   final_weights.csv           header of source labels, then N rows of N+M values
//   snapshots/weights_<e>.csv   same layout, after epoch e
//   resolved_config.json        full config including seed
//   manifest.json               seed, version, wall time, guarded update count

#include <charconv>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "neuronpg/config.hpp"
#include "neuronpg/experiment.hpp"
#include "neuronpg/version.hpp"

namespace neuronpg {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> source_labels(const ExperimentConfig& c) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < c.n_neurons; ++j) labels.push_back("n" + std::to_string(j));
  if (c.experiment == ExperimentKind::arm) {
    for (std::size_t k = 0; k < c.arm.n_encoders; ++k) labels.push_back("intended" + std::to_string(k));
    for (std::size_t k = 0; k < c.arm.n_encoders; ++k) labels.push_back("observed" + std::to_string(k));
  }
  return labels;
}

inline std::string weights_csv(const WeightMatrix& w, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j) out += ',';
    out += labels[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < w.n_network(); ++i) {
    const auto row = w.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

inline std::string metrics_csv(const RunResult& r) {
  const std::size_t n = r.config.n_neurons;
  std::string out = "epoch";
  for (std::size_t i = 0; i < n; ++i) out += ",expected_reward_" + std::to_string(i);
  out += ",pair_correlation";
  for (std::size_t i = 0; i < n; ++i) out += ",mean_abs_w_" + std::to_string(i);
  out += ",arm_tracking_error\n";
  for (const auto& row : r.metrics) {
    out += std::to_string(row.epoch);
    for (double v : row.expected_reward) out += ',' + format_double(v);
    out += ',' + format_double(row.pair_correlation);
    for (double v : row.mean_abs_w) out += ',' + format_double(v);
    out += ',';
    if (row.arm_tracking_error) out += format_double(*row.arm_tracking_error);
    out += '\n';
  }
  return out;
}

inline std::string epoch_meta_csv(const RunResult& r) {
  std::string out = "epoch,frequency,phase,target_angle,guarded_updates\n";
  for (std::size_t e = 0; e < r.epoch_meta.size(); ++e) {
    const auto& m = r.epoch_meta[e];
    out += std::to_string(e) + ',' + format_double(m.frequency) + ',' + format_double(m.phase) + ',' +
           format_double(m.target_angle) + ',' + std::to_string(r.guarded_per_epoch[e]) + '\n';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing; check that the directory is writable");
  out << text;
  out.close();
  if (!out) throw IoError("failed while writing '" + path.string() + "' (disk full?)");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit_outputs(const RunResult& r, const std::filesystem::path& dir, double wall_seconds = 0.0) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "snapshots", ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  const auto labels = source_labels(r.config);
  write_text(dir / "metrics.csv", metrics_csv(r));
  write_text(dir / "epoch_meta.csv", epoch_meta_csv(r));
  write_text(dir / "final_weights.csv", weights_csv(r.final_weights, labels));
  write_text(dir / "initial_weights.csv", weights_csv(r.initial_weights, labels));
  for (const auto& [epoch, w] : r.weight_snapshots) {
    write_text(dir / "snapshots" / ("weights_" + std::to_string(epoch) + ".csv"), weights_csv(w, labels));
  }
  write_text(dir / "resolved_config.json", config_to_json(r.config).dump(2) + "\n");

  nlohmann::json manifest = {{"seed", r.config.seed},
                             {"version", kVersion},
                             {"wall_time_seconds", wall_seconds},
                             {"n_epochs", r.metrics.size()},
                             {"guarded_updates", r.guarded_updates}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

/// Parsed numeric CSV: header labels plus rows. Empty fields read as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw IoError("csv: missing column '" + name + "'");
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      if (f.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) throw IoError("csv: bad number '" + f + "'");
      row.push_back(v);
    }
    if (row.size() != table.header.size()) throw IoError("csv: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  if (first) throw IoError("csv: empty file");
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

}  // namespace neuronpg

#endif  // NEURONPG_OUTPUT_HPP
