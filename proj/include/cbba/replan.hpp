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

#ifndef CBBA_REPLAN_HPP
#define CBBA_REPLAN_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cbba/core.hpp"
#include "cbba/graph.hpp"

namespace cbba {

enum class ResetKind { kNone, kFull, kPartialLocal, kPartialTeam };

inline std::string to_string(ResetKind kind) {
  switch (kind) {
    case ResetKind::kNone: return "none";
    case ResetKind::kFull: return "full";
    case ResetKind::kPartialLocal: return "partial-local";
    case ResetKind::kPartialTeam: return "partial-team";
  }
  return "none";
}

inline ResetKind reset_kind_from_string(const std::string& s) {
  if (s == "none") return ResetKind::kNone;
  if (s == "full") return ResetKind::kFull;
  if (s == "partial-local") return ResetKind::kPartialLocal;
  if (s == "partial-team") return ResetKind::kPartialTeam;
  throw InputError("unknown reset strategy '" + s + "' (expected none, full, partial-local, partial-team)");
}

inline constexpr ResetKind kAllResetKinds[] = {ResetKind::kNone, ResetKind::kPartialLocal,
                                               ResetKind::kPartialTeam, ResetKind::kFull};

/// Knobs shared by the partial strategies.
///
/// `n_reset` is the team-wide release count for partial-team replanning;
/// when `t_response` is set it is derived from the response budget instead.
/// `n_i_reset` is the per-agent count for partial-local replanning.
/// `subteam_size`, when set, restricts a team replan to that many agents
/// nearest the new task.
struct StrategyParams {
  int n_reset = 0;
  int n_i_reset = 0;
  std::optional<double> t_response;
  double delta_comm = 1.0;
  std::optional<int> subteam_size;

  void check() const {
    if (n_reset < 0 || n_i_reset < 0) throw InputError("reset counts must be >= 0");
    if (!(delta_comm > 0.0)) throw InputError("delta_comm must be > 0");
    if (t_response && !(*t_response >= 0.0)) throw InputError("t_response must be >= 0");
    if (subteam_size && *subteam_size < 1) throw InputError("subteam size must be >= 1");
  }

  friend bool operator==(const StrategyParams&, const StrategyParams&) = default;
};

struct ResetStrategy {
  ResetKind kind = ResetKind::kNone;
  StrategyParams params;
};

struct Subteam {
  std::vector<AgentId> members;  // ascending
  int diameter = 1;

  bool contains(AgentId a) const { return std::binary_search(members.begin(), members.end(), a); }
};

//==============================================================================
// Per-agent resets

inline AgentState reset_none(AgentState state) { return state; }

/// Empties bundle and path and forgets the agent's own wins. Beliefs about
/// other agents are kept.
inline AgentState reset_full(AgentState state, const TaskTable& tasks) {
  for (TaskId id : state.bundle) state.belief.clear(tasks.index_of(id));
  state.bundle.clear();
  state.path.clear();
  return state;
}

/// Releases the last `n_i_reset` bundle entries, i.e. the lowest bids.
inline AgentState reset_partial_local(AgentState state, int n_i_reset, const TaskTable& tasks) {
  if (n_i_reset < 0) throw InputError("reset_partial_local: count must be >= 0");
  const std::size_t keep = state.bundle.size() - std::min(state.bundle.size(), static_cast<std::size_t>(n_i_reset));
  for (std::size_t n = keep; n < state.bundle.size(); ++n) {
    const TaskId id = state.bundle[n];
    state.belief.clear(tasks.index_of(id));
    state.path = remove_task(std::move(state.path), id);
  }
  state.bundle.resize(keep);
  return state;
}

/// Tasks the team can afford to reallocate within `t_response` when each
/// one costs `d` rounds of `delta_comm`.
inline int compute_n_reset(double t_response, int d, double delta_comm) {
  if (d < 1) throw InputError("compute_n_reset: diameter must be >= 1");
  if (!(delta_comm > 0.0)) throw InputError("compute_n_reset: delta_comm must be > 0");
  const double q = std::floor(t_response / (static_cast<double>(d) * delta_comm));
  return q > 0.0 ? static_cast<int>(q) : 0;
}

/// The `n_reset` lowest allocated bids, optionally only among tasks won by a
/// subteam. Ordered by ascending bid, ties by task id. Every agent holding
/// the same converged beliefs computes the same list.
inline std::vector<TaskId> team_reset_set(const BeliefState& belief, int n_reset, const TaskTable& tasks,
                                          const Subteam* restrict_to = nullptr) {
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < belief.bids.size(); ++j) {
    if (belief.winners[j] == kNoAgent) continue;
    if (restrict_to && !restrict_to->contains(belief.winners[j])) continue;
    pool.push_back(j);
  }
  std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
    if (belief.bids[a] != belief.bids[b]) return belief.bids[a] < belief.bids[b];
    return tasks[a].id < tasks[b].id;
  });
  pool.resize(std::min(pool.size(), static_cast<std::size_t>(std::max(n_reset, 0))));
  std::vector<TaskId> out;
  out.reserve(pool.size());
  for (std::size_t j : pool) out.push_back(tasks[j].id);
  return out;
}

/// Drops every task in `reset` from bundle and path and clears its belief,
/// whoever was believed to hold it.
inline AgentState reset_partial_team(AgentState state, const std::vector<TaskId>& reset, const TaskTable& tasks) {
  for (TaskId id : reset) {
    state.bundle = remove_task(std::move(state.bundle), id);
    state.path = remove_task(std::move(state.path), id);
    state.belief.clear(tasks.index_of(id));
  }
  return state;
}

/// The `size` agents nearest `new_task`, grown along shortest graph paths
/// until the group is connected. A singleton has diameter 1.
inline Subteam select_subteam(const std::vector<AgentSpec>& agents, const CommGraph& graph,
                              const TaskSpec& new_task, int size) {
  if (size < 1) throw InputError("select_subteam: size must be >= 1");
  if (graph.size() != agents.size()) throw InputError("select_subteam: graph and agent list differ in size");
  if (!graph.connected()) throw InputError("select_subteam: communication graph is disconnected");

  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return distance(agents[a].position, new_task.position) < distance(agents[b].position, new_task.position);
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(size)));

  std::vector<bool> chosen(agents.size(), false);
  for (std::size_t a : order) chosen[a] = true;

  for (;;) {
    // Component of the nearest agent inside the current selection.
    std::vector<bool> reached(agents.size(), false);
    std::vector<std::size_t> stack{order.front()};
    reached[order.front()] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : graph.neighbors(u)) {
        if (chosen[v] && !reached[v]) {
          reached[v] = true;
          stack.push_back(v);
        }
      }
    }
    bool all = true;
    for (std::size_t a = 0; a < agents.size(); ++a) all = all && (!chosen[a] || reached[a]);
    if (all) break;

    // Shortest bridge from that component to any other selected agent.
    std::vector<long> parent(agents.size(), -2);
    std::queue<std::size_t> frontier;
    for (std::size_t a = 0; a < agents.size(); ++a) {
      if (reached[a]) {
        parent[a] = -1;
        frontier.push(a);
      }
    }
    std::optional<std::size_t> target;
    while (!frontier.empty() && !target) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : graph.neighbors(u)) {
        if (parent[v] != -2) continue;
        parent[v] = static_cast<long>(u);
        if (chosen[v]) {
          target = v;
          break;
        }
        frontier.push(v);
      }
    }
    for (long v = static_cast<long>(*target); parent[static_cast<std::size_t>(v)] != -1;
         v = parent[static_cast<std::size_t>(v)]) {
      chosen[static_cast<std::size_t>(v)] = true;
    }
  }

  Subteam team;
  std::vector<std::size_t> nodes;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (chosen[a]) {
      nodes.push_back(a);
      team.members.push_back(agents[a].id);
    }
  }
  std::sort(team.members.begin(), team.members.end());
  team.diameter = nodes.size() == 1 ? 1 : diameter(graph.induced(nodes));
  return team;
}

}  // namespace cbba

#endif  // CBBA_REPLAN_HPP
