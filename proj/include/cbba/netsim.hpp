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

#ifndef CBBA_NETSIM_HPP
#define CBBA_NETSIM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cbba/bundle.hpp"
#include "cbba/consensus.hpp"
#include "cbba/core.hpp"
#include "cbba/graph.hpp"
#include "cbba/replan.hpp"

namespace cbba {

/// One (agent, task) belief change observed across a round.
struct BeliefEvent {
  Round round = 0;
  AgentId agent;
  TaskId task;
  AgentId old_winner;
  AgentId new_winner;
  Score old_bid = kNegInf;
  Score new_bid = kNegInf;
  friend bool operator==(const BeliefEvent&, const BeliefEvent&) = default;
};

using EventLog = std::vector<BeliefEvent>;

/// A partial-team reset waiting for the next round.
struct TeamReset {
  int n_reset = 0;
  std::optional<Subteam> subteam;
};

/// Everything the simulator needs between rounds. Agent i sits at index i
/// and is node i of the graph.
struct WorldState {
  std::vector<AgentState> agents;
  TaskTable tasks;
  CommGraph graph;
  Round round = 0;
  bool replanning = true;  // reset strategies active until the team converges
  std::optional<TeamReset> pending_team_reset;
  std::uint64_t messages = 0;
  std::shared_ptr<EventLog> events;  // optional sink, shared across copies
};

inline WorldState make_world(const std::vector<AgentSpec>& agents, const TaskTable& tasks, CommGraph graph) {
  if (graph.size() != agents.size()) throw InputError("make_world: graph size differs from agent count");
  WorldState w;
  w.tasks = tasks;
  w.graph = std::move(graph);
  w.agents.reserve(agents.size());
  for (std::size_t a = 0; a < agents.size(); ++a) {
    check_agent(agents[a]);
    if (agents[a].id.value != static_cast<int>(a)) {
      throw InputError("make_world: agent ids must be 0..n-1 in order");
    }
    w.agents.emplace_back(agents[a], tasks.size(), agents.size());
  }
  return w;
}

inline std::vector<AgentSpec> agent_specs(const WorldState& world) {
  std::vector<AgentSpec> out;
  out.reserve(world.agents.size());
  for (const auto& a : world.agents) out.push_back(a.spec);
  return out;
}

/// One synchronous round: reset, bundle build, snapshot, merge (ascending
/// sender id). Snapshots are all taken before any agent merges.
inline WorldState run_round(WorldState world, const ResetStrategy& strategy) {
  const Round r = world.round + 1;
  const TaskTable& tasks = world.tasks;
  const std::size_t n = world.agents.size();

  std::vector<BeliefState> before;
  if (world.events) {
    before.reserve(n);
    for (const auto& a : world.agents) before.push_back(a.belief);
  }

  if (world.replanning) {
    for (auto& agent : world.agents) {
      switch (strategy.kind) {
        case ResetKind::kNone:
          break;
        case ResetKind::kFull:
          agent = reset_full(std::move(agent), tasks);
          break;
        case ResetKind::kPartialLocal:
          agent = reset_partial_local(std::move(agent), strategy.params.n_i_reset, tasks);
          break;
        case ResetKind::kPartialTeam:
          if (world.pending_team_reset) {
            const auto& pending = *world.pending_team_reset;
            const Subteam* team = pending.subteam ? &*pending.subteam : nullptr;
            agent = reset_partial_team(std::move(agent),
                                       team_reset_set(agent.belief, pending.n_reset, tasks, team), tasks);
          }
          break;
      }
    }
  }
  world.pending_team_reset.reset();

  for (auto& agent : world.agents) agent = bundle_build(std::move(agent), tasks);

  std::vector<BeliefSnapshot> outbox;
  outbox.reserve(n);
  for (auto& agent : world.agents) {
    agent.belief.timestamps[static_cast<std::size_t>(agent.id().value)] = r;
    outbox.push_back(snapshot_of(agent));
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k : world.graph.neighbors(i)) {
      auto merged = apply_message(world.agents[i], outbox[k], r, tasks);
      world.agents[i] = std::move(merged.state);
      ++world.messages;
    }
  }

  if (world.events) {
    for (std::size_t i = 0; i < n; ++i) {
      const BeliefState& now = world.agents[i].belief;
      for (std::size_t j = 0; j < tasks.size(); ++j) {
        const AgentId ow = j < before[i].winners.size() ? before[i].winners[j] : kNoAgent;
        const Score ob = j < before[i].bids.size() ? before[i].bids[j] : kNegInf;
        if (ow != now.winners[j] || ob != now.bids[j]) {
          world.events->push_back({r, world.agents[i].id(), tasks[j].id, ow, now.winners[j], ob, now.bids[j]});
        }
      }
    }
  }

  world.round = r;
  return world;
}

/// Every agent holds the same winners and bids, and each believed winner
/// actually has the task in its path.
inline bool in_agreement(const WorldState& world) {
  if (world.agents.empty()) return true;
  const BeliefState& ref = world.agents.front().belief;
  for (const auto& a : world.agents) {
    if (a.belief.winners != ref.winners || a.belief.bids != ref.bids) return false;
  }
  for (std::size_t j = 0; j < world.tasks.size(); ++j) {
    const AgentId w = ref.winners[j];
    if (w == kNoAgent) continue;
    if (w.value < 0 || static_cast<std::size_t>(w.value) >= world.agents.size()) return false;
    if (!contains(world.agents[static_cast<std::size_t>(w.value)].path, world.tasks[j].id)) return false;
  }
  return true;
}

/// Paths, bundles, winners and bids match (timestamps and counters ignored).
inline bool same_allocation(const WorldState& a, const WorldState& b) {
  if (a.agents.size() != b.agents.size()) return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    const AgentState& x = a.agents[i];
    const AgentState& y = b.agents[i];
    if (x.path != y.path || x.bundle != y.bundle || x.belief.winners != y.belief.winners ||
        x.belief.bids != y.belief.bids) {
      return false;
    }
  }
  return true;
}

/// Converged when the team agrees, no one-shot reset is still pending, and
/// one more round under `strategy` would change nothing. `next` receives
/// that trial round when given.
inline bool is_converged(const WorldState& world, const ResetStrategy& strategy, WorldState* next = nullptr) {
  if (!in_agreement(world)) {
    if (next) *next = run_round(world, strategy);
    return false;
  }
  WorldState trial = run_round(world, strategy);
  const bool fixed = !world.pending_team_reset && same_allocation(world, trial);
  if (next) *next = std::move(trial);
  return fixed;
}

inline bool is_converged(const WorldState& world) { return is_converged(world, ResetStrategy{}); }

/// Reset strategies go quiet once the team has converged.
inline void mark_converged(WorldState& world) {
  world.replanning = false;
  world.pending_team_reset.reset();
}

/// Reveals a new task to every agent at once and re-arms the reset strategy.
/// Timestamps survive every reset.
/// A partial-team replan needs the team's converged bids, so it refuses to
/// start while the team is still replanning.
inline void announce_task(WorldState& world, const TaskSpec& task, const ResetStrategy& strategy) {
  if (strategy.kind == ResetKind::kPartialTeam && world.replanning) {
    throw InputError("partial-team replan requested before the team converged");
  }
  strategy.params.check();
  world.tasks.add(task);
  for (auto& a : world.agents) a.belief.grow_tasks(world.tasks.size());
  world.replanning = true;
  if (strategy.kind == ResetKind::kFull) {
    // A full replan re-solves from scratch: every agent forgets the whole
    // allocation once, then rebuilds from an empty bundle each round.
    for (auto& a : world.agents) {
      for (std::size_t j = 0; j < world.tasks.size(); ++j) a.belief.clear(j);
      a.bundle.clear();
      a.path.clear();
    }
  }
  if (strategy.kind == ResetKind::kPartialTeam) {
    TeamReset pending;
    int d = world.agents.size() > 1 ? diameter(world.graph) : 1;
    if (strategy.params.subteam_size) {
      pending.subteam = select_subteam(agent_specs(world), world.graph, task, *strategy.params.subteam_size);
      d = pending.subteam->diameter;
    }
    pending.n_reset = strategy.params.t_response
                          ? compute_n_reset(*strategy.params.t_response, std::max(d, 1), strategy.params.delta_comm)
                          : strategy.params.n_reset;
    world.pending_team_reset = pending;
  }
}

inline Score team_score(const WorldState& world) {
  Score total = 0.0;
  for (const auto& a : world.agents) total += path_score(a.spec, a.path, world.tasks);
  return total;
}

/// Messages one round puts on the wire: one per directed edge.
inline std::uint64_t messages_per_round(const CommGraph& g) { return 2 * g.edge_count(); }

}  // namespace cbba

#endif  // CBBA_NETSIM_HPP
