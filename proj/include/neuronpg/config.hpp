#ifndef NEURONPG_CONFIG_HPP
#define NEURONPG_CONFIG_HPP

// Experiment configuration and its strict JSON mapping. Unknown keys are
// rejected at every nesting level.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "neuronpg/arm.hpp"
#include "neuronpg/neuron.hpp"
#include "neuronpg/policy.hpp"
#include "neuronpg/reward.hpp"

namespace neuronpg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { coincidence, arm };

struct SinusoidInput {
  double amplitude = 20.0;
  double f_min = 0.005;  // cycles per bin
  double f_max = 0.05;
};

struct ArmSetup {
  ArmParams plant;
  std::size_t n_encoders = 20;
  double width = std::numbers::pi / 10;  // range / 10
  double peak_rate = 4.0;
  std::size_t delay = 5;
  std::size_t motor_agonist = 0;
  std::size_t motor_antagonist = 1;
  double target_margin = std::numbers::pi / 10;  // defaults to width
};

struct InitSpec {
  double scale = 0.5;
  double encoder_scale = 0.5;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::coincidence;
  std::size_t n_neurons = 5;
  std::size_t n_epochs = 5000;
  std::size_t bins_per_epoch = 200;
  std::uint64_t seed = 1;
  NeuronParams neuron;
  PolicyParams policy;
  bool clip = true;
  double w_max = 10.0;
  Schedule schedule;
  UpdateMode update_mode = UpdateMode::centered;
  RewardSpec reward;
  SinusoidInput input;
  ArmSetup arm;
  InitSpec init;
  std::vector<std::pair<std::size_t, std::size_t>> frozen;  // (post, pre) pairs
  std::pair<std::size_t, std::size_t> pair{0, 1};           // pair_correlation neurons
  std::string output_dir = "out";
  std::size_t snapshot_every = 1000;

  std::size_t n_external() const noexcept {
    return experiment == ExperimentKind::arm ? 2 * arm.n_encoders : 0;
  }

  void validate() const;
};

// Exploration and step size shared by both experiment presets.
inline PolicyParams experiment_policy() { return {0.5, 0.5, 0.1, 0.9}; }

inline ExperimentConfig coincidence_defaults() {
  ExperimentConfig c;
  c.policy = experiment_policy();
  c.experiment = ExperimentKind::coincidence;
  c.reward.global = CoincidenceReward{0, 1};
  c.pair = {0, 1};
  return c;
}

inline ExperimentConfig arm_defaults() {
  ExperimentConfig c;
  c.policy = experiment_policy();
  c.experiment = ExperimentKind::arm;
  c.n_neurons = 50;
  c.n_epochs = 300;
  c.reward.global = PatternCorrelationReward{};
  c.pair = {0, 1};
  c.snapshot_every = 100;
  return c;
}

inline void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (n_neurons < 2) fail("n_neurons must be >= 2");
  if (bins_per_epoch < 2) fail("bins_per_epoch must be >= 2");
  if (snapshot_every == 0) fail("snapshot_every must be >= 1");
  try {
    neuron.validate();
    policy.validate();
    if (experiment == ExperimentKind::arm) arm.plant.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (!(w_max > 0.0)) fail("w_max must be > 0");
  if (schedule.kind == Schedule::Kind::round_robin && (schedule.k == 0 || schedule.k > n_neurons)) {
    fail("schedule.k must lie in [1, n_neurons]");
  }
  if (!(reward.spike_penalty <= 0.0) || !std::isfinite(reward.spike_penalty)) fail("reward.spike_penalty must be <= 0");
  if (!(reward.global_weight >= 0.0) || !std::isfinite(reward.global_weight)) fail("reward.global_weight must be >= 0");
  if (!(init.scale >= 0.0) || !(init.encoder_scale >= 0.0)) fail("init scales must be >= 0");
  if (pair.first >= n_neurons || pair.second >= n_neurons || pair.first == pair.second) {
    fail("pair must name two distinct network neurons");
  }

  auto check_global = [&](const GlobalReward& g) {
    if (const auto* c = std::get_if<CoincidenceReward>(&g)) {
      if (c->i == c->j) fail("coincidence indices must be distinct");
      if (c->i >= n_neurons || c->j >= n_neurons) fail("coincidence index out of range");
    } else {
      const auto& p = std::get<PatternCorrelationReward>(g);
      if (experiment != ExperimentKind::arm) fail("pattern_correlation reward needs the arm experiment");
      if (p.window == 0) fail("pattern_correlation window must be >= 1");
      if (p.window > bins_per_epoch) fail("pattern_correlation window exceeds bins_per_epoch");
      const std::size_t ni = p.intended.empty() ? arm.n_encoders : p.intended.size();
      const std::size_t no = p.observed.empty() ? arm.n_encoders : p.observed.size();
      if (ni != no) fail("pattern_correlation intended/observed sets differ in size");
      for (auto k : p.intended) if (k >= arm.n_encoders) fail("pattern_correlation index out of range");
      for (auto k : p.observed) if (k >= arm.n_encoders) fail("pattern_correlation index out of range");
    }
  };
  check_global(reward.global);
  if (reward.decomposition) {
    try {
      validate_decomposition(*reward.decomposition, n_neurons);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    for (const auto& g : *reward.decomposition) check_global(g.global);
  }

  if (experiment == ExperimentKind::coincidence) {
    if (!(input.f_min > 0.0) || !(input.f_min < input.f_max) || !std::isfinite(input.f_max)) {
      fail("input requires 0 < f_min < f_max");
    }
    if (!std::isfinite(input.amplitude)) fail("input.amplitude must be finite");
  } else {
    if (arm.n_encoders < 2) fail("arm.n_encoders must be >= 2");
    if (!(arm.width > 0.0)) fail("arm.width must be > 0");
    if (!(arm.peak_rate >= 0.0)) fail("arm.peak_rate must be >= 0");
    if (arm.motor_agonist >= n_neurons || arm.motor_antagonist >= n_neurons ||
        arm.motor_agonist == arm.motor_antagonist) {
      fail("arm motor neurons must be two distinct network neurons");
    }
    if (!(arm.target_margin >= 0.0) ||
        !(arm.plant.angle_min + arm.target_margin <= arm.plant.angle_max - arm.target_margin)) {
      fail("arm.target_margin leaves no room for targets");
    }
  }
  for (const auto& [post, pre] : frozen) {
    if (post >= n_neurons || pre >= n_neurons + n_external()) fail("frozen connection out of range");
  }
}

// ---------------------------------------------------------------------------
// JSON mapping

namespace detail {

using nlohmann::json;

/// Reads fields from one JSON object, then rejects anything left unread.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: " + path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: " + where(key) + " has the wrong type");
    }
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("config: unknown key '" + where(it.key().c_str()) + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline std::size_t read_count(StrictObject& o, const char* key, std::size_t current) {
  std::int64_t v = static_cast<std::int64_t>(current);
  o.read(key, v);
  if (v < 0) throw ConfigError("config: " + o.where(key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

inline GlobalReward parse_global(const json& j, const std::string& path) {
  StrictObject o(j, path);
  std::string kind;
  o.read("kind", kind);
  GlobalReward out;
  if (kind == "coincidence") {
    CoincidenceReward c;
    c.i = read_count(o, "i", 0);
    c.j = read_count(o, "j", 1);
    out = c;
  } else if (kind == "pattern_correlation") {
    PatternCorrelationReward p;
    o.read("intended", p.intended);
    o.read("observed", p.observed);
    p.window = read_count(o, "window", p.window);
    out = p;
  } else {
    throw ConfigError("config: " + o.where("kind") + " must be 'coincidence' or 'pattern_correlation'");
  }
  o.finish();
  return out;
}

inline json global_to_json(const GlobalReward& g) {
  if (const auto* c = std::get_if<CoincidenceReward>(&g)) {
    return {{"kind", "coincidence"}, {"i", c->i}, {"j", c->j}};
  }
  const auto& p = std::get<PatternCorrelationReward>(g);
  return {{"kind", "pattern_correlation"}, {"intended", p.intended}, {"observed", p.observed}, {"window", p.window}};
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::StrictObject;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig c;
  {
    std::string kind = "coincidence";
    if (auto it = j.find("experiment"); it != j.end()) {
      if (!it->is_string()) throw ConfigError("config: experiment must be a string");
      kind = it->get<std::string>();
    }
    if (kind == "coincidence") c = coincidence_defaults();
    else if (kind == "arm") c = arm_defaults();
    else throw ConfigError("config: experiment must be 'coincidence' or 'arm'");
  }

  StrictObject top(j, "");
  std::string ignored;
  top.read("experiment", ignored);
  c.n_neurons = detail::read_count(top, "n_neurons", c.n_neurons);
  c.n_epochs = detail::read_count(top, "n_epochs", c.n_epochs);
  c.bins_per_epoch = detail::read_count(top, "bins_per_epoch", c.bins_per_epoch);
  top.read("seed", c.seed);
  top.read("output_dir", c.output_dir);
  c.snapshot_every = detail::read_count(top, "snapshot_every", c.snapshot_every);

  if (const auto* n = top.sub("neuron")) {
    StrictObject o(*n, "neuron");
    o.read("v_rest", c.neuron.v_rest);
    o.read("tau_leak", c.neuron.tau_leak);
    o.read("r_max", c.neuron.r_max);
    o.read("gain", c.neuron.gain);
    o.read("v_half", c.neuron.v_half);
    o.finish();
  }
  if (const auto* p = top.sub("policy")) {
    StrictObject o(*p, "policy");
    o.read("alpha", c.policy.alpha);
    o.read("sigma", c.policy.sigma);
    o.read("beta", c.policy.beta);
    o.read("gamma", c.policy.gamma);
    o.read("clip", c.clip);
    o.read("w_max", c.w_max);
    std::string mode = to_string(c.update_mode);
    o.read("update_mode", mode);
    if (mode == "centered") c.update_mode = UpdateMode::centered;
    else if (mode == "literal") c.update_mode = UpdateMode::literal;
    else throw ConfigError("config: policy.update_mode must be 'centered' or 'literal'");
    o.finish();
  }
  if (const auto* s = top.sub("schedule")) {
    StrictObject o(*s, "schedule");
    std::string kind = "all";
    o.read("kind", kind);
    if (kind == "all") {
      c.schedule = Schedule::all();
    } else if (kind == "round_robin") {
      c.schedule = Schedule::round_robin(detail::read_count(o, "k", 1));
    } else {
      throw ConfigError("config: schedule.kind must be 'all' or 'round_robin'");
    }
    o.finish();
  }
  if (const auto* r = top.sub("reward")) {
    StrictObject o(*r, "reward");
    if (const auto* g = o.sub("global")) c.reward.global = detail::parse_global(*g, "reward.global");
    o.read("spike_penalty", c.reward.spike_penalty);
    o.read("global_weight", c.reward.global_weight);
    if (const auto* d = o.sub("decomposition"); d && !d->is_null()) {
      if (!d->is_array()) throw ConfigError("config: reward.decomposition must be an array");
      std::vector<RewardGroup> groups;
      for (std::size_t k = 0; k < d->size(); ++k) {
        const std::string path = "reward.decomposition[" + std::to_string(k) + "]";
        StrictObject go((*d)[k], path);
        RewardGroup grp;
        go.read("neurons", grp.neurons);
        const auto* gg = go.sub("global");
        if (!gg) throw ConfigError("config: " + path + ".global is required");
        grp.global = detail::parse_global(*gg, path + ".global");
        go.finish();
        groups.push_back(std::move(grp));
      }
      c.reward.decomposition = std::move(groups);
    }
    o.finish();
  }
  if (const auto* in = top.sub("input")) {
    StrictObject o(*in, "input");
    o.read("amplitude", c.input.amplitude);
    o.read("f_min", c.input.f_min);
    o.read("f_max", c.input.f_max);
    o.finish();
  }
  if (const auto* a = top.sub("arm")) {
    StrictObject o(*a, "arm");
    o.read("inertia", c.arm.plant.inertia);
    o.read("damping", c.arm.plant.damping);
    o.read("torque_gain", c.arm.plant.torque_gain);
    o.read("angle_min", c.arm.plant.angle_min);
    o.read("angle_max", c.arm.plant.angle_max);
    c.arm.n_encoders = detail::read_count(o, "n_encoders", c.arm.n_encoders);
    const double range = c.arm.plant.angle_max - c.arm.plant.angle_min;
    c.arm.width = range / 10.0;
    o.read("width", c.arm.width);
    o.read("peak_rate", c.arm.peak_rate);
    c.arm.delay = detail::read_count(o, "delay", c.arm.delay);
    c.arm.motor_agonist = detail::read_count(o, "motor_agonist", c.arm.motor_agonist);
    c.arm.motor_antagonist = detail::read_count(o, "motor_antagonist", c.arm.motor_antagonist);
    c.arm.target_margin = c.arm.width;
    o.read("target_margin", c.arm.target_margin);
    o.finish();
  }
  if (const auto* in = top.sub("init")) {
    StrictObject o(*in, "init");
    o.read("scale", c.init.scale);
    o.read("encoder_scale", c.init.encoder_scale);
    o.finish();
  }
  if (const auto* f = top.sub("frozen")) {
    try {
      c.frozen = f->get<std::vector<std::pair<std::size_t, std::size_t>>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config: frozen must be a list of [post, pre] pairs");
    }
  }
  if (const auto* p = top.sub("pair")) {
    try {
      c.pair = p->get<std::pair<std::size_t, std::size_t>>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config: pair must be [i, j]");
    }
  }
  top.finish();
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment == ExperimentKind::arm ? "arm" : "coincidence";
  j["n_neurons"] = c.n_neurons;
  j["n_epochs"] = c.n_epochs;
  j["bins_per_epoch"] = c.bins_per_epoch;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["snapshot_every"] = c.snapshot_every;
  j["neuron"] = {{"v_rest", c.neuron.v_rest},
                 {"tau_leak", c.neuron.tau_leak},
                 {"r_max", c.neuron.r_max},
                 {"gain", c.neuron.gain},
                 {"v_half", c.neuron.v_half}};
  j["policy"] = {{"alpha", c.policy.alpha}, {"sigma", c.policy.sigma}, {"beta", c.policy.beta},
                 {"gamma", c.policy.gamma}, {"clip", c.clip},           {"w_max", c.w_max},
                 {"update_mode", to_string(c.update_mode)}};
  if (c.schedule.kind == Schedule::Kind::all_simultaneous) {
    j["schedule"] = {{"kind", "all"}};
  } else {
    j["schedule"] = {{"kind", "round_robin"}, {"k", c.schedule.k}};
  }
  nlohmann::json r = {{"global", detail::global_to_json(c.reward.global)},
                      {"spike_penalty", c.reward.spike_penalty},
                      {"global_weight", c.reward.global_weight}};
  if (c.reward.decomposition) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : *c.reward.decomposition) {
      groups.push_back({{"neurons", g.neurons}, {"global", detail::global_to_json(g.global)}});
    }
    r["decomposition"] = groups;
  }
  j["reward"] = r;
  if (c.experiment == ExperimentKind::coincidence) {
    j["input"] = {{"amplitude", c.input.amplitude}, {"f_min", c.input.f_min}, {"f_max", c.input.f_max}};
  } else {
    j["arm"] = {{"inertia", c.arm.plant.inertia},
                {"damping", c.arm.plant.damping},
                {"torque_gain", c.arm.plant.torque_gain},
                {"angle_min", c.arm.plant.angle_min},
                {"angle_max", c.arm.plant.angle_max},
                {"n_encoders", c.arm.n_encoders},
                {"width", c.arm.width},
                {"peak_rate", c.arm.peak_rate},
                {"delay", c.arm.delay},
                {"motor_agonist", c.arm.motor_agonist},
                {"motor_antagonist", c.arm.motor_antagonist},
                {"target_margin", c.arm.target_margin}};
  }
  j["init"] = {{"scale", c.init.scale}, {"encoder_scale", c.init.encoder_scale}};
  j["frozen"] = c.frozen;
  j["pair"] = c.pair;
  return j;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace neuronpg

#endif  // NEURONPG_CONFIG_HPP
