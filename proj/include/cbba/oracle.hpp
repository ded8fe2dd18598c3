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

#ifndef CBBA_ORACLE_HPP
#define CBBA_ORACLE_HPP

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "cbba/core.hpp"

namespace cbba {

struct SgaStep {
  TaskId task;
  AgentId agent;
  Score bid = 0.0;
  friend bool operator==(const SgaStep&, const SgaStep&) = default;
};

/// Centralized sequential-greedy allocation.
struct SgaSolution {
  std::map<TaskId, AgentId> assignment;
  std::vector<SgaStep> sequence;  // in selection order
  std::vector<Path> paths;        // indexed like the input agents
};

/// Repeatedly assigns the globally best (agent, task) pair, scored exactly as
/// bundle_build scores it: best insertion gain clamped to the agent's lowest
/// bid so far. Ties: lower agent id, then lower task id.
inline SgaSolution sga_solve(const std::vector<AgentSpec>& agents, const TaskTable& tasks) {
  struct Working {
    Path path;
    Score floor = std::numeric_limits<Score>::infinity();
    std::vector<Insertion> gains;
    bool stale = true;
  };
  std::vector<Working> work(agents.size());
  std::vector<bool> taken(tasks.size(), false);
  SgaSolution out;

  for (;;) {
    std::optional<std::size_t> best_agent;
    std::size_t best_task = 0;
    Score best_bid = 0.0;
    for (std::size_t a = 0; a < agents.size(); ++a) {
      Working& w = work[a];
      if (w.path.size() >= static_cast<std::size_t>(agents[a].capacity)) continue;
      if (w.stale) {
        const PathTimeline timeline(agents[a], w.path, tasks);
        w.gains.assign(tasks.size(), Insertion{});
        for (std::size_t j = 0; j < tasks.size(); ++j) {
          if (!taken[j]) w.gains[j] = timeline.best_insertion(tasks[j]);
        }
        w.stale = false;
      }
      for (std::size_t j = 0; j < tasks.size(); ++j) {
        if (taken[j]) continue;
        const Score c = std::min(w.gains[j].gain, w.floor);
        if (!(c > 0.0)) continue;
        bool wins = !best_agent || c > best_bid;
        if (best_agent && c == best_bid) {
          const AgentId ia = agents[a].id;
          const AgentId ib = agents[*best_agent].id;
          wins = ia < ib || (ia == ib && tasks[j].id < tasks[best_task].id);
        }
        if (wins) {
          best_agent = a;
          best_task = j;
          best_bid = c;
        }
      }
    }
    if (!best_agent) break;

    Working& w = work[*best_agent];
    w.path = insert_at(w.path, tasks[best_task].id, w.gains[best_task].index,
                       static_cast<std::size_t>(agents[*best_agent].capacity));
    w.floor = best_bid;
    w.stale = true;
    taken[best_task] = true;
    out.assignment[tasks[best_task].id] = agents[*best_agent].id;
    out.sequence.push_back({tasks[best_task].id, agents[*best_agent].id, best_bid});
  }

  out.paths.reserve(work.size());
  for (auto& w : work) out.paths.push_back(std::move(w.path));
  return out;
}

/// Same, with every agent's capacity overridden to `capacity`.
inline SgaSolution sga_solve(std::vector<AgentSpec> agents, const TaskTable& tasks, int capacity) {
  if (capacity < 1) throw InputError("sga_solve: capacity must be >= 1");
  for (auto& a : agents) a.capacity = capacity;
  return sga_solve(agents, tasks);
}

}  // namespace cbba

#endif  // CBBA_ORACLE_HPP
