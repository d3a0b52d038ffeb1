#ifndef CHOMET_CONFIG_HPP
#define CHOMET_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "chomet/benchmarks.hpp"
#include "chomet/learner.hpp"
#include "chomet/radio_model.hpp"

namespace chomet {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class AlgorithmKind { chomet, ttt, oracle_per_slot, oracle_dp };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::chomet;
  TttComparatorConfig ttt;  ///< used when kind == ttt

  /// Stable id used in CSV output, e.g. "chomet" or "ttt_3_8".
  std::string id() const
  {
    switch (kind) {
      case AlgorithmKind::chomet: return "chomet";
      case AlgorithmKind::oracle_per_slot: return "oracle_per_slot";
      case AlgorithmKind::oracle_dp: return "oracle_dp";
      case AlgorithmKind::ttt: break;
    }
    std::string s = "ttt_" + std::to_string(ttt.best) + "_" + std::to_string(ttt.ttt);
    if (ttt.use_offsets) s += "_offsets";
    if (ttt.observation_lag != 1) s += "_lag" + std::to_string(ttt.observation_lag);
    return s;
  }

  static AlgorithmSpec comparator(std::size_t best, std::size_t ttt)
  {
    AlgorithmSpec a;
    a.kind = AlgorithmKind::ttt;
    a.ttt.best = best;
    a.ttt.ttt = ttt;
    return a;
  }
};

inline constexpr std::string_view kValidAlgorithmIds =
    "chomet, oracle_per_slot, oracle_dp, ttt_<N>_<TTT> (or ttt(<N>,<TTT>))";

/// Parses "chomet", "oracle_per_slot", "oracle_dp", "ttt_3_8" or "ttt(3,8)".
inline AlgorithmSpec parse_algorithm_id(std::string_view text)
{
  AlgorithmSpec a;
  if (text == "chomet") return a;
  if (text == "oracle_per_slot") {
    a.kind = AlgorithmKind::oracle_per_slot;
    return a;
  }
  if (text == "oracle_dp") {
    a.kind = AlgorithmKind::oracle_dp;
    return a;
  }
  const auto fail = [&] {
    return ConfigError("unknown algorithm id '" + std::string(text) +
                       "'; valid ids: " + std::string(kValidAlgorithmIds));
  };
  if (text.size() < 5 || text.substr(0, 3) != "ttt") throw fail();
  std::string rest(text.substr(4));
  char open = text[3];
  if (open == '(') {
    if (rest.empty() || rest.back() != ')') throw fail();
    rest.pop_back();
  } else if (open != '_') {
    throw fail();
  }
  const char sep = open == '(' ? ',' : '_';
  const auto cut = rest.find(sep);
  if (cut == std::string::npos) throw fail();
  try {
    std::size_t used_n = 0, used_t = 0;
    const std::string n = rest.substr(0, cut), t = rest.substr(cut + 1);
    const unsigned long best = std::stoul(n, &used_n);
    const unsigned long ttt = std::stoul(t, &used_t);
    if (used_n != n.size() || used_t != t.size()) throw fail();
    return AlgorithmSpec::comparator(best, ttt);
  } catch (const std::logic_error&) {
    throw fail();
  }
}

struct ExperimentConfig {
  ScenarioConfig scenario;
  StepOverrides chomet;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds{1};
  std::size_t preparations_window = 100;
  std::size_t objective_window = 50;
  std::string output_path;

  void validate() const
  {
    try {
      scenario.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (algorithms.empty()) throw ConfigError("experiment: at least one algorithm is required");
    if (seeds.empty()) throw ConfigError("experiment: seeds must not be empty");
    if (preparations_window == 0 || objective_window == 0)
      throw ConfigError("output: metric windows must be positive");
    if (!(chomet.theta_scale > 0.0)) throw ConfigError("chomet.theta_scale must be > 0");
    if (!(chomet.meta_step_scale > 0.0)) throw ConfigError("chomet.meta_step_scale must be > 0");
    if (chomet.meta_step && !(*chomet.meta_step > 0.0))
      throw ConfigError("chomet.meta_step must be > 0");
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const auto& alg = algorithms[a];
      if (alg.kind != AlgorithmKind::ttt) continue;
      try {
        alg.ttt.validate(scenario.cells);
      } catch (const InvalidArgument& e) {
        throw ConfigError("algorithms[" + std::to_string(a) + "] (" + alg.id() + "): " + e.what());
      }
    }
  }
};

/// Meta-step multiplier used by the shipped presets; see README.
inline constexpr double kPresetMetaStepScale = 100.0;

/// The (N, TTT) grid N in {1, 3, 7}, TTT in {2, 8, 12}.
inline std::vector<AlgorithmSpec> comparator_grid()
{
  std::vector<AlgorithmSpec> grid;
  for (std::size_t n : {1, 3, 7})
    for (std::size_t t : {2, 8, 12}) grid.push_back(AlgorithmSpec::comparator(n, t));
  return grid;
}

/// Built-in headline runs: "volatile" (T = 5000, SINR redrawn every 10 slots)
/// and "stationary" (T = 3000, every 600 slots).
inline ExperimentConfig preset(std::string_view name)
{
  ExperimentConfig c;
  c.scenario.ues = 20;
  c.scenario.cells = 10;
  c.scenario.beta = 0.5;
  c.scenario.gamma = 10.0;
  c.scenario.delta = 5.0;
  if (name == "volatile") {
    c.scenario.mode = ScenarioMode::volatile_;
    c.scenario.slots = 5000;
    c.scenario.change_period = 10;
  } else if (name == "stationary") {
    c.scenario.mode = ScenarioMode::stationary;
    c.scenario.slots = 3000;
    c.scenario.change_period = 600;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected volatile or stationary)");
  }
  c.chomet.meta_step_scale = kPresetMetaStepScale;
  c.algorithms.push_back(AlgorithmSpec{});
  for (auto& a : comparator_grid()) c.algorithms.push_back(a);
  c.algorithms.push_back(AlgorithmSpec{AlgorithmKind::oracle_per_slot, {}});
  c.seeds = {1, 2, 3, 4, 5};
  c.output_path = "chomet_" + std::string(name) + ".csv";
  return c;
}

// -- TOML loading -------------------------------------------------------------

namespace detail {

class TomlReader {
 public:
  explicit TomlReader(std::string path) : path_(std::move(path)) {}

  ConfigError error(const std::string& key, const std::string& msg) const
  {
    return ConfigError(path_ + ": " + key + ": " + msg);
  }

  void only_keys(const toml::table& table, const std::string& where,
                 std::initializer_list<std::string_view> allowed) const
  {
    for (const auto& [key, node] : table) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key.str() == a;
      if (!ok) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        const std::string full = where.empty() ? std::string(key.str())
                                               : where + "." + std::string(key.str());
        throw error(full, "unknown key (allowed: " + list + ")");
      }
    }
  }

  std::optional<double> number(const toml::table& t, std::string_view key,
                               const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value<double>()) return *v;  // accepts integers too
    throw error(where + "." + std::string(key), "expected a number");
  }

  std::optional<std::int64_t> integer(const toml::table& t, std::string_view key,
                                      const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<std::int64_t>()) return *v;
    throw error(where + "." + std::string(key), "expected an integer");
  }

  std::optional<std::size_t> count(const toml::table& t, std::string_view key,
                                   const std::string& where, std::int64_t min = 0) const
  {
    auto v = integer(t, key, where);
    if (!v) return std::nullopt;
    if (*v < min)
      throw error(where + "." + std::string(key), "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(*v);
  }

  std::optional<bool> boolean(const toml::table& t, std::string_view key,
                              const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<bool>()) return *v;
    throw error(where + "." + std::string(key), "expected true or false");
  }

  std::optional<std::string> string(const toml::table& t, std::string_view key,
                                    const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    if (auto v = n->value_exact<std::string>()) return *v;
    throw error(where + "." + std::string(key), "expected a string");
  }

  std::optional<std::vector<double>> numbers(const toml::table& t, std::string_view key,
                                             const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    const std::string full = where + "." + std::string(key);
    const toml::array* arr = n->as_array();
    if (arr == nullptr) throw error(full, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto v = (*arr)[i].value<double>();
      if (!v) throw error(full + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(*v);
    }
    return out;
  }

  std::optional<Interval> interval(const toml::table& t, std::string_view key,
                                   const std::string& where) const
  {
    auto v = numbers(t, key, where);
    if (!v) return std::nullopt;
    if (v->size() != 2) throw error(where + "." + std::string(key), "expected [lower, upper]");
    return Interval{(*v)[0], (*v)[1]};
  }

  /// A number (constant) or an array (one value per slot).
  std::optional<Schedule> schedule(const toml::table& t, std::string_view key,
                                   const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return std::nullopt;
    if (n->is_array()) return Schedule(*numbers(t, key, where));
    if (auto v = n->value<double>()) return Schedule(*v);
    throw error(where + "." + std::string(key), "expected a number or an array of numbers");
  }

  const toml::table* table(const toml::table& t, std::string_view key,
                           const std::string& where) const
  {
    const toml::node* n = t.get(key);
    if (n == nullptr) return nullptr;
    if (const auto* tbl = n->as_table()) return tbl;
    throw error(where.empty() ? std::string(key) : where + "." + std::string(key),
                "expected a table");
  }

 private:
  std::string path_;
};

inline void read_physical(const TomlReader& r, const toml::table& t, PhysicalLayout& out)
{
  const std::string where = "scenario.physical";
  r.only_keys(t, where, {"gain_range_db", "frequency_reuse", "cells"});
  if (auto v = r.interval(t, "gain_range_db", where)) out.gain_range_db = *v;
  if (auto v = r.count(t, "frequency_reuse", where, 1)) out.frequency_reuse = *v;
  if (const toml::node* n = t.get("cells")) {
    const toml::array* arr = n->as_array();
    if (arr == nullptr || !arr->is_array_of_tables())
      throw r.error(where + ".cells", "expected [[scenario.physical.cells]] tables");
    out.cells.clear();
    for (std::size_t j = 0; j < arr->size(); ++j) {
      const auto& cell = *(*arr)[j].as_table();
      const std::string cw = where + ".cells[" + std::to_string(j) + "]";
      r.only_keys(cell, cw, {"transmit_power", "bandwidth_mhz", "noise_psd", "cochannel"});
      CellConfig c;
      if (auto v = r.number(cell, "transmit_power", cw)) c.transmit_power = *v;
      if (auto v = r.number(cell, "bandwidth_mhz", cw)) c.bandwidth_mhz = *v;
      if (auto v = r.number(cell, "noise_psd", cw)) c.noise_psd = *v;
      if (auto v = r.numbers(cell, "cochannel", cw)) {
        for (double k : *v) {
          if (k < 0 || k != static_cast<double>(static_cast<std::size_t>(k)))
            throw r.error(cw + ".cochannel", "expected non-negative cell indices");
          c.cochannel.push_back(static_cast<std::size_t>(k));
        }
      }
      out.cells.push_back(std::move(c));
    }
  }
}

inline void read_scenario(const TomlReader& r, const toml::table& t, ScenarioConfig& s)
{
  const std::string w = "scenario";
  r.only_keys(t, w,
              {"mode", "ues", "cells", "slots", "change_period", "sinr_range_db", "bandwidths_mhz",
               "offset_range_db", "offsets_every_slot", "switching_weight_floor", "availability",
               "availability_min", "beta", "gamma", "delta", "physical"});
  if (auto v = r.string(t, "mode", w)) {
    try {
      s.mode = parse_scenario_mode(*v);
    } catch (const InvalidArgument& e) {
      throw r.error(w + ".mode", e.what());
    }
  }
  if (auto v = r.count(t, "ues", w, 1)) s.ues = *v;
  if (auto v = r.count(t, "cells", w, 1)) s.cells = *v;
  if (auto v = r.count(t, "slots", w, 1)) s.slots = *v;
  if (auto v = r.count(t, "change_period", w, 1)) s.change_period = *v;
  if (auto v = r.interval(t, "sinr_range_db", w)) s.sinr_range_db = *v;
  if (auto v = r.numbers(t, "bandwidths_mhz", w)) s.bandwidth_set = *v;
  if (auto v = r.interval(t, "offset_range_db", w)) s.offset_range_db = *v;
  if (auto v = r.boolean(t, "offsets_every_slot", w)) s.offsets_every_slot = *v;
  if (auto v = r.number(t, "switching_weight_floor", w)) s.switching_weight_floor = *v;
  if (auto v = r.string(t, "availability", w)) {
    if (*v == "fixed") s.availability = AvailabilityMode::fixed;
    else if (*v == "random") s.availability = AvailabilityMode::random;
    else throw r.error(w + ".availability", "expected \"fixed\" or \"random\"");
  }
  if (auto v = r.number(t, "availability_min", w)) s.availability_min = *v;
  if (auto v = r.schedule(t, "beta", w)) s.beta = *v;
  if (auto v = r.schedule(t, "gamma", w)) s.gamma = *v;
  if (auto v = r.schedule(t, "delta", w)) s.delta = *v;
  if (const auto* p = r.table(t, "physical", w)) read_physical(r, *p, s.physical);
}

}  // namespace detail

/// Parses TOML text on top of `base` (defaults or a preset) and validates.
///
/// Sections: [scenario] (+ [scenario.physical]), [chomet], [[comparators]],
/// [experiment] and [output]. See README for the key reference.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {},
                                     const std::string& source = "<config>")
{
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
        << e.description();
    throw ConfigError(msg.str());
  }
  const detail::TomlReader r(source);
  r.only_keys(root, "", {"scenario", "chomet", "comparators", "experiment", "output"});

  ExperimentConfig c = std::move(base);
  if (const auto* s = r.table(root, "scenario", "")) detail::read_scenario(r, *s, c.scenario);

  bool chomet_section = false;
  bool chomet_enabled = true;
  if (const auto* t = r.table(root, "chomet", "")) {
    chomet_section = true;
    r.only_keys(*t, "chomet", {"enabled", "theta_scale", "meta_step_scale", "meta_step"});
    if (auto v = r.boolean(*t, "enabled", "chomet")) chomet_enabled = *v;
    if (auto v = r.number(*t, "theta_scale", "chomet")) c.chomet.theta_scale = *v;
    if (auto v = r.number(*t, "meta_step_scale", "chomet")) c.chomet.meta_step_scale = *v;
    if (auto v = r.number(*t, "meta_step", "chomet")) c.chomet.meta_step = *v;
  }

  std::vector<AlgorithmSpec> comparators;
  if (const toml::node* n = root.get("comparators")) {
    const toml::array* arr = n->as_array();
    if (arr == nullptr || !arr->is_array_of_tables())
      throw r.error("comparators", "expected [[comparators]] tables");
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const auto& t = *(*arr)[k].as_table();
      const std::string w = "comparators[" + std::to_string(k) + "]";
      r.only_keys(t, w, {"best", "ttt", "use_offsets", "observation_lag"});
      AlgorithmSpec a = AlgorithmSpec::comparator(1, 1);
      auto best = r.count(t, "best", w, 0);
      auto ttt = r.count(t, "ttt", w, 1);
      if (!best) throw r.error(w + ".best", "missing (number of best cells N)");
      if (!ttt) throw r.error(w + ".ttt", "missing (time-to-trigger in slots)");
      a.ttt.best = *best;
      a.ttt.ttt = *ttt;
      if (auto v = r.boolean(t, "use_offsets", w)) a.ttt.use_offsets = *v;
      if (auto v = r.count(t, "observation_lag", w, 0)) a.ttt.observation_lag = *v;
      if (a.ttt.best > c.scenario.cells)
        throw r.error(w + ".best", "N = " + std::to_string(a.ttt.best) + " exceeds the " +
                                       std::to_string(c.scenario.cells) + " cells");
      comparators.push_back(a);
    }
  }

  std::optional<std::vector<AlgorithmSpec>> listed;
  if (const auto* t = r.table(root, "experiment", "")) {
    r.only_keys(*t, "experiment", {"algorithms", "seeds"});
    if (const toml::node* n = t->get("algorithms")) {
      const toml::array* arr = n->as_array();
      if (arr == nullptr) throw r.error("experiment.algorithms", "expected an array of ids");
      listed.emplace();
      for (std::size_t k = 0; k < arr->size(); ++k) {
        const std::string w = "experiment.algorithms[" + std::to_string(k) + "]";
        auto id = (*arr)[k].value_exact<std::string>();
        if (!id) throw r.error(w, "expected a string id");
        if (*id == "comparators") {
          listed->insert(listed->end(), comparators.begin(), comparators.end());
          continue;
        }
        try {
          listed->push_back(parse_algorithm_id(*id));
        } catch (const InvalidArgument& e) {
          throw r.error(w, e.what());
        }
      }
    }
    if (const toml::node* n = t->get("seeds")) {
      const toml::array* arr = n->as_array();
      if (arr == nullptr) throw r.error("experiment.seeds", "expected an array of integers");
      if (arr->empty()) throw r.error("experiment.seeds", "must not be empty");
      c.seeds.clear();
      for (std::size_t k = 0; k < arr->size(); ++k) {
        auto v = (*arr)[k].value_exact<std::int64_t>();
        if (!v || *v < 0)
          throw r.error("experiment.seeds[" + std::to_string(k) + "]",
                        "expected a non-negative integer");
        c.seeds.push_back(static_cast<std::uint64_t>(*v));
      }
    }
  }

  // Algorithm set: an explicit list wins; otherwise [chomet] and
  // [[comparators]] adjust whatever the base config carries.
  const auto is_chomet = [](const AlgorithmSpec& a) { return a.kind == AlgorithmKind::chomet; };
  if (listed) {
    c.algorithms = std::move(*listed);
  } else if (!comparators.empty() || chomet_section) {
    const bool had_chomet = std::any_of(c.algorithms.begin(), c.algorithms.end(), is_chomet);
    const bool want_chomet = chomet_section ? chomet_enabled : had_chomet;
    std::vector<AlgorithmSpec> others;
    if (comparators.empty()) {
      for (const auto& a : c.algorithms)
        if (!is_chomet(a)) others.push_back(a);
    } else {
      others = comparators;
    }
    c.algorithms.clear();
    if (want_chomet) c.algorithms.push_back(AlgorithmSpec{});
    c.algorithms.insert(c.algorithms.end(), others.begin(), others.end());
  }

  if (const auto* t = r.table(root, "output", "")) {
    r.only_keys(*t, "output", {"path", "preparations_window", "objective_window"});
    if (auto v = r.string(*t, "path", "output")) c.output_path = *v;
    if (auto v = r.count(*t, "preparations_window", "output", 1)) c.preparations_window = *v;
    if (auto v = r.count(*t, "objective_window", "output", 1)) c.objective_window = *v;
  }

  c.validate();
  return c;
}

/// Reads and validates a TOML experiment file.
inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {})
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base), path);
}

}  // namespace chomet

#endif  // CHOMET_CONFIG_HPP
