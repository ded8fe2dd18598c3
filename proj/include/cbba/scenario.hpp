// Copyright 2026 The CBBA-PR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBBA_SCENARIO_HPP
#define CBBA_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbba/core.hpp"
#include "cbba/graph.hpp"
#include "cbba/netsim.hpp"
#include "cbba/replan.hpp"

namespace cbba {

/// Scenario or state file that could not be read.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kScenarioVersion = 1;

struct TopologySpec {
  TopologyKind kind = TopologyKind::kComplete;
  std::uint64_t seed = 0;
  double radius = 0.5;
  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

/// A task revealed after the team converges, with optional per-arrival
/// strategy overrides.
struct Arrival {
  TaskSpec task;
  std::optional<StrategyParams> params;
  friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Reproducible world: the same Scenario always yields the same trace.
struct Scenario {
  int version = kScenarioVersion;
  std::uint64_t seed = 0;
  double area = 100.0;
  int capacity = 1;  // L_t
  std::vector<AgentSpec> agents;
  std::vector<TaskSpec> tasks;
  std::vector<Arrival> arrivals;
  TopologySpec topology;
  StrategyParams params;

  StrategyParams params_for(std::size_t arrival) const {
    return arrivals[arrival].params.value_or(params);
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Ids must be dense and ordered for agents, unique across all tasks.
inline void check_scenario(const Scenario& s) {
  if (s.version != kScenarioVersion) {
    throw InputError("unsupported scenario version " + std::to_string(s.version));
  }
  if (s.agents.empty()) throw InputError("scenario has no agents");
  if (s.capacity < 1) throw InputError("scenario capacity L_t must be >= 1");
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    check_agent(s.agents[a]);
    if (s.agents[a].id.value != static_cast<int>(a)) throw InputError("agent ids must be 0..n-1 in order");
  }
  TaskTable all(s.tasks);
  for (const auto& arr : s.arrivals) {
    all.add(arr.task);
    if (arr.params) arr.params->check();
  }
  s.params.check();
}

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int n_agents = 8;
  int n_tasks = 80;
  int n_arrivals = 8;
  double area = 100.0;
  std::optional<int> capacity;  // default: ceil((n_t + arrivals) / n_r) + 1
  double discount = 0.95;
  double reward = 1.0;
  double speed = 1.0;
  TopologyKind topology = TopologyKind::kComplete;
  double radius = 0.5;
  int n_reset = 24;
};

/// Eight agents, 80 tasks, 8 arrivals, L_t from default_capacity (12).
inline GeneratorConfig baseline_preset(std::uint64_t seed = 1) {
  GeneratorConfig g;
  g.seed = seed;
  return g;
}

/// Same as the baseline preset with L_t = 10, so n_r * L_t < n_t + arrivals.
inline GeneratorConfig constrained_preset(std::uint64_t seed = 1) {
  GeneratorConfig g = baseline_preset(seed);
  g.capacity = 10;
  return g;
}

inline int default_capacity(int n_agents, int n_tasks, int n_arrivals) {
  return (n_tasks + n_arrivals + n_agents - 1) / n_agents + 1;
}

/// Agents, then initial tasks, then arrivals, all uniform in the square
/// [0, area]^2 from one seeded stream.
inline Scenario generate_scenario(const GeneratorConfig& cfg) {
  if (cfg.n_agents < 1 || cfg.n_tasks < 0 || cfg.n_arrivals < 0) {
    throw InputError("generate_scenario: counts must be positive");
  }
  if (!(cfg.area > 0.0)) throw InputError("generate_scenario: area must be > 0");
  if (!(cfg.discount > 0.0 && cfg.discount <= 1.0)) throw InputError("generate_scenario: discount must lie in (0, 1]");

  Scenario s;
  s.seed = cfg.seed;
  s.area = cfg.area;
  s.capacity = cfg.capacity.value_or(default_capacity(cfg.n_agents, cfg.n_tasks, cfg.n_arrivals));
  s.topology = {cfg.topology, cfg.seed, cfg.radius};
  s.params.n_reset = cfg.n_reset;
  s.params.n_i_reset = cfg.n_reset / cfg.n_agents;

  std::mt19937_64 rng(cfg.seed);
  auto point = [&] {
    const double x = unit_uniform(rng) * cfg.area;
    const double y = unit_uniform(rng) * cfg.area;
    return Vec2{x, y};
  };
  for (int a = 0; a < cfg.n_agents; ++a) {
    s.agents.push_back({AgentId{a}, point(), cfg.speed, s.capacity});
  }
  int next_id = 0;
  for (int t = 0; t < cfg.n_tasks; ++t) {
    s.tasks.push_back({TaskId{next_id++}, point(), cfg.reward, cfg.discount});
  }
  for (int t = 0; t < cfg.n_arrivals; ++t) {
    s.arrivals.push_back({{TaskId{next_id++}, point(), cfg.reward, cfg.discount}, std::nullopt});
  }
  check_scenario(s);
  return s;
}

//==============================================================================
// JSON encoding

namespace detail {

using nlohmann::json;

inline json to_json(const StrategyParams& p) {
  json j{{"n_reset", p.n_reset}, {"n_i_reset", p.n_i_reset}, {"delta_comm", p.delta_comm}};
  j["t_response"] = p.t_response ? json(*p.t_response) : json(nullptr);
  j["subteam_size"] = p.subteam_size ? json(*p.subteam_size) : json(nullptr);
  return j;
}

inline json to_json(const TaskSpec& t) {
  return {{"id", t.id.value}, {"x", t.position.x}, {"y", t.position.y}, {"reward", t.reward}, {"discount", t.discount}};
}

inline json to_json(const AgentSpec& a) {
  return {{"id", a.id.value}, {"x", a.position.x}, {"y", a.position.y}, {"speed", a.speed}, {"capacity", a.capacity}};
}

/// Field lookup that names what is missing or mistyped.
inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing required field '" + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

inline std::optional<double> opt_double(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(where + "." + key + ": expected a number or null");
  return it->get<double>();
}

inline std::optional<int> opt_int(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw ParseError(where + "." + key + ": expected an integer or null");
  return it->get<int>();
}

inline const json& array_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw ParseError(where + "." + key + ": expected an array");
  return v;
}

inline StrategyParams params_from(const json& j, const std::string& where) {
  StrategyParams p;
  p.n_reset = get<int>(j, "n_reset", where);
  p.n_i_reset = get<int>(j, "n_i_reset", where);
  p.delta_comm = get<double>(j, "delta_comm", where);
  p.t_response = opt_double(j, "t_response", where);
  p.subteam_size = opt_int(j, "subteam_size", where);
  return p;
}

inline TaskSpec task_from(const json& j, const std::string& where) {
  return {TaskId{get<int>(j, "id", where)},
          {get<double>(j, "x", where), get<double>(j, "y", where)},
          get<double>(j, "reward", where),
          get<double>(j, "discount", where)};
}

inline AgentSpec agent_from(const json& j, const std::string& where, int default_capacity) {
  AgentSpec a{AgentId{get<int>(j, "id", where)},
              {get<double>(j, "x", where), get<double>(j, "y", where)},
              get<double>(j, "speed", where),
              default_capacity};
  if (auto c = opt_int(j, "capacity", where)) a.capacity = *c;
  return a;
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace detail

inline std::string scenario_to_string(const Scenario& s) {
  using detail::json;
  json j;
  j["version"] = s.version;
  j["seed"] = s.seed;
  j["area"] = s.area;
  j["L_t"] = s.capacity;
  j["topology"] = {{"kind", to_string(s.topology.kind)}, {"seed", s.topology.seed}, {"radius", s.topology.radius}};
  j["strategy"] = detail::to_json(s.params);
  j["agents"] = json::array();
  for (const auto& a : s.agents) j["agents"].push_back(detail::to_json(a));
  j["tasks"] = json::array();
  for (const auto& t : s.tasks) j["tasks"].push_back(detail::to_json(t));
  j["arrivals"] = json::array();
  for (const auto& arr : s.arrivals) {
    json e = detail::to_json(arr.task);
    if (arr.params) e["strategy"] = detail::to_json(*arr.params);
    j["arrivals"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

inline Scenario scenario_from_string(const std::string& text, const std::string& source = "scenario") {
  using detail::get;
  const auto j = detail::parse_text(text, source);
  Scenario s;
  s.version = get<int>(j, "version", source);
  if (s.version != kScenarioVersion) {
    throw ParseError(source + ".version: unsupported version " + std::to_string(s.version));
  }
  s.seed = get<std::uint64_t>(j, "seed", source);
  s.area = j.contains("area") ? get<double>(j, "area", source) : 100.0;
  s.capacity = get<int>(j, "L_t", source);

  const auto& topo = detail::field(j, "topology", source);
  const std::string tw = source + ".topology";
  try {
    s.topology.kind = topology_from_string(get<std::string>(topo, "kind", tw));
  } catch (const InputError& e) {
    throw ParseError(tw + ".kind: " + e.what());
  }
  s.topology.seed = topo.contains("seed") ? get<std::uint64_t>(topo, "seed", tw) : s.seed;
  s.topology.radius = topo.contains("radius") ? get<double>(topo, "radius", tw) : 0.5;

  s.params = detail::params_from(detail::field(j, "strategy", source), source + ".strategy");

  const auto& agents = detail::array_field(j, "agents", source);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    s.agents.push_back(detail::agent_from(agents[a], source + ".agents[" + std::to_string(a) + "]", s.capacity));
  }
  const auto& tasks = detail::array_field(j, "tasks", source);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    s.tasks.push_back(detail::task_from(tasks[t], source + ".tasks[" + std::to_string(t) + "]"));
  }
  const auto& arrivals = detail::array_field(j, "arrivals", source);
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    const std::string where = source + ".arrivals[" + std::to_string(t) + "]";
    Arrival arr{detail::task_from(arrivals[t], where), std::nullopt};
    if (arrivals[t].contains("strategy")) arr.params = detail::params_from(arrivals[t]["strategy"], where + ".strategy");
    s.arrivals.push_back(arr);
  }
  try {
    check_scenario(s);
  } catch (const InputError& e) {
    throw ParseError(source + ": " + e.what());
  }
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  detail::write_file(path, scenario_to_string(s));
}

inline Scenario load_scenario(const std::string& path) {
  return scenario_from_string(detail::read_file(path), path);
}

/// FNV-1a over the canonical serialization; stable across platforms.
inline std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario_to_string(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline CommGraph build_topology(const Scenario& s) {
  return make_topology(s.topology.kind, s.agents.size(), s.topology.seed, s.topology.radius);
}

//==============================================================================
// World state files (for re-validation)

inline std::string world_to_string(const WorldState& w) {
  using detail::json;
  json j;
  j["version"] = kScenarioVersion;
  j["round"] = w.round;
  j["tasks"] = json::array();
  for (const auto& t : w.tasks.all()) j["tasks"].push_back(detail::to_json(t));
  j["edges"] = json::array();
  for (auto [a, b] : w.graph.edges()) j["edges"].push_back({a, b});
  j["agents"] = json::array();
  for (const auto& a : w.agents) {
    json e = detail::to_json(a.spec);
    json path = json::array(), bundle = json::array(), winners = json::array(), bids = json::array();
    for (TaskId t : a.path) path.push_back(t.value);
    for (TaskId t : a.bundle) bundle.push_back(t.value);
    for (AgentId z : a.belief.winners) winners.push_back(z.value);
    for (Score y : a.belief.bids) bids.push_back(y == kNegInf ? json(nullptr) : json(y));
    e["path"] = path;
    e["bundle"] = bundle;
    e["winners"] = winners;
    e["bids"] = bids;
    e["timestamps"] = a.belief.timestamps;
    j["agents"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

inline WorldState world_from_string(const std::string& text, const std::string& source = "state") {
  using detail::get;
  const auto j = detail::parse_text(text, source);
  if (get<int>(j, "version", source) != kScenarioVersion) throw ParseError(source + ".version: unsupported version");

  WorldState w;
  w.round = get<Round>(j, "round", source);
  const auto& tasks = detail::array_field(j, "tasks", source);
  try {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      w.tasks.add(detail::task_from(tasks[t], source + ".tasks[" + std::to_string(t) + "]"));
    }
  } catch (const InputError& e) {
    throw ParseError(source + ".tasks: " + e.what());
  }

  const auto& agents = detail::array_field(j, "agents", source);
  w.graph = CommGraph(agents.size());
  const auto& edges = detail::array_field(j, "edges", source);
  try {
    for (const auto& e : edges) w.graph.connect(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ".edges: " + e.what());
  } catch (const InputError& e) {
    throw ParseError(source + ".edges: " + e.what());
  }

  for (std::size_t a = 0; a < agents.size(); ++a) {
    const std::string where = source + ".agents[" + std::to_string(a) + "]";
    const auto& e = agents[a];
    AgentState st(detail::agent_from(e, where, 1), w.tasks.size(), agents.size());
    if (!e.contains("capacity")) throw ParseError(where + ": missing required field 'capacity'");
    try {
      for (const auto& t : detail::array_field(e, "path", where)) st.path.push_back(TaskId{t.get<int>()});
      for (const auto& t : detail::array_field(e, "bundle", where)) st.bundle.push_back(TaskId{t.get<int>()});
      const auto& winners = detail::array_field(e, "winners", where);
      const auto& bids = detail::array_field(e, "bids", where);
      if (winners.size() != w.tasks.size() || bids.size() != w.tasks.size()) {
        throw ParseError(where + ": winners/bids length must equal the task count");
      }
      for (std::size_t t = 0; t < winners.size(); ++t) {
        st.belief.winners[t] = AgentId{winners[t].get<int>()};
        st.belief.bids[t] = bids[t].is_null() ? kNegInf : bids[t].get<double>();
      }
      st.belief.timestamps = detail::array_field(e, "timestamps", where).get<std::vector<Round>>();
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(where + ": " + ex.what());
    }
    w.agents.push_back(std::move(st));
  }
  w.replanning = false;
  return w;
}

inline void save_world(const WorldState& w, const std::string& path) { detail::write_file(path, world_to_string(w)); }

inline WorldState load_world(const std::string& path) { return world_from_string(detail::read_file(path), path); }

}  // namespace cbba

#endif  // CBBA_SCENARIO_HPP
