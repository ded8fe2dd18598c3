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

#ifndef CBBA_BUNDLE_HPP
#define CBBA_BUNDLE_HPP

#include <limits>
#include <optional>

#include "cbba/core.hpp"

namespace cbba {

/// Bid `a` held by `a_winner` beats bid `b` held by `b_winner`: strictly
/// higher, or equal and held by the lower agent id.
inline bool outbids(Score a, AgentId a_winner, Score b, AgentId b_winner) {
  if (a > b) return true;
  if (a < b) return false;
  return a_winner < b_winner && a_winner != kNoAgent;
}

/// May `self` bid `c` against the currently believed winning bid?
inline bool eligible_bid(Score c, Score current_bid, AgentId self, AgentId current_winner) {
  if (current_winner == kNoAgent) return c > current_bid;
  return outbids(c, self, current_bid, current_winner);
}

/// Lowest bid the agent holds (its last bundle entry), or +inf for an empty
/// bundle. New bids are clamped to this to keep the bundle's bids
/// non-increasing.
inline Score bid_floor(const AgentState& state, const TaskTable& tasks) {
  if (state.bundle.empty()) return std::numeric_limits<Score>::infinity();
  return state.belief.bids[tasks.index_of(state.bundle.back())];
}

/// Refreshes the raw insertion gains of every task against the current path.
inline void refresh_gains(AgentState& state, const TaskTable& tasks) {
  GainCache& cache = state.cache;
  if (cache.valid && cache.n_tasks == tasks.size() && cache.path == state.path) return;
  const PathTimeline timeline(state.spec, state.path, tasks);
  cache.gains.assign(tasks.size(), Insertion{});
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    if (contains(state.path, tasks[j].id)) continue;
    cache.gains[j] = timeline.best_insertion(tasks[j]);
  }
  cache.path = state.path;
  cache.n_tasks = tasks.size();
  cache.valid = true;
}

/// Greedily extends the agent's bundle until it is full or nothing is worth
/// bidding on. Existing bundle entries are never touched.
inline AgentState bundle_build(AgentState state, const TaskTable& tasks) {
  const auto capacity = static_cast<std::size_t>(state.spec.capacity);
  const AgentId self = state.id();
  BeliefState& belief = state.belief;

  while (state.bundle.size() < capacity) {
    refresh_gains(state, tasks);
    const Score floor = bid_floor(state, tasks);

    std::optional<std::size_t> pick;
    Score pick_bid = kNegInf;
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const TaskId id = tasks[j].id;
      if (contains(state.bundle, id)) continue;
      const Score c = std::min(state.cache.gains[j].gain, floor);
      if (!(c > 0.0)) continue;
      if (!eligible_bid(c, belief.bids[j], self, belief.winners[j])) continue;
      if (!pick || c > pick_bid || (c == pick_bid && id < tasks[*pick].id)) {
        pick = j;
        pick_bid = c;
      }
    }
    if (!pick) break;

    const TaskId chosen = tasks[*pick].id;
    state.path = insert_at(state.path, chosen, state.cache.gains[*pick].index, capacity);
    state.bundle.push_back(chosen);
    belief.bids[*pick] = pick_bid;
    belief.winners[*pick] = self;
  }
  return state;
}

}  // namespace cbba

#endif  // CBBA_BUNDLE_HPP
