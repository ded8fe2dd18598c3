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

#ifndef CBBA_CONSENSUS_HPP
#define CBBA_CONSENSUS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "cbba/bundle.hpp"
#include "cbba/core.hpp"

namespace cbba {

/// What one agent broadcasts in a round. Copied by value; never aliased.
struct BeliefSnapshot {
  AgentId sender;
  std::vector<AgentId> winners;
  std::vector<Score> bids;
  std::vector<Round> timestamps;
  friend bool operator==(const BeliefSnapshot&, const BeliefSnapshot&) = default;
};

inline BeliefSnapshot snapshot_of(const AgentState& state) {
  return {state.id(), state.belief.winners, state.belief.bids, state.belief.timestamps};
}

struct MergeOutcome {
  AgentState state;
  bool changed = false;
  std::vector<TaskId> released;
};

struct ReleaseOutcome {
  AgentState state;
  std::vector<TaskId> released;
};

/// Drops bundle entries from `index` onward (from bundle and path). Entries
/// strictly after `index` that the agent still believes it wins are cleared;
/// the entry at `index` keeps whatever belief conflict resolution gave it.
inline ReleaseOutcome release_from(AgentState state, std::size_t index, const TaskTable& tasks) {
  if (index >= state.bundle.size()) throw ContractViolation("release_from: bundle index out of range");
  ReleaseOutcome out;
  out.released.assign(state.bundle.begin() + static_cast<std::ptrdiff_t>(index), state.bundle.end());
  for (std::size_t n = index; n < state.bundle.size(); ++n) {
    const TaskId id = state.bundle[n];
    state.path = remove_task(std::move(state.path), id);
    if (n > index) {
      const std::size_t j = tasks.index_of(id);
      if (state.belief.winners[j] == state.id()) state.belief.clear(j);
    }
  }
  state.bundle.resize(index);
  out.state = std::move(state);
  return out;
}

enum class MergeAction { kLeave, kUpdate, kReset };

/// Conflict resolution for one task. `i` receives from `k`.
inline MergeAction resolve(AgentId i, AgentId k, AgentId z_k, Score y_k, AgentId z_i, Score y_i,
                           const std::vector<Round>& s_k, const std::vector<Round>& s_i) {
  auto fresher = [&](AgentId m) {
    const auto idx = static_cast<std::size_t>(m.value);
    return s_k[idx] > s_i[idx];
  };
  auto staler = [&](AgentId m) {
    const auto idx = static_cast<std::size_t>(m.value);
    return s_i[idx] > s_k[idx];
  };
  const bool better = outbids(y_k, z_k, y_i, z_i);
  using enum MergeAction;

  if (z_k == k) {
    if (z_i == i) return better ? kUpdate : kLeave;
    if (z_i == k) return kUpdate;
    if (z_i == kNoAgent) return kUpdate;
    return fresher(z_i) || better ? kUpdate : kLeave;
  }
  if (z_k == i) {
    if (z_i == i) return kLeave;
    if (z_i == k) return kReset;
    if (z_i == kNoAgent) return kLeave;
    return fresher(z_i) ? kReset : kLeave;
  }
  if (z_k != kNoAgent) {
    const AgentId m = z_k;
    if (z_i == i) return fresher(m) && better ? kUpdate : kLeave;
    if (z_i == k) return fresher(m) ? kUpdate : kReset;
    if (z_i == m) return fresher(m) ? kUpdate : kLeave;
    if (z_i == kNoAgent) return fresher(m) ? kUpdate : kLeave;
    const AgentId n = z_i;
    if (fresher(m) && (fresher(n) || better)) return kUpdate;
    if (fresher(n) && staler(m)) return kReset;
    return kLeave;
  }
  // Sender believes nobody wins.
  if (z_i == i) return kLeave;
  if (z_i == k) return kUpdate;
  if (z_i == kNoAgent) return kLeave;
  return fresher(z_i) ? kUpdate : kLeave;
}

/// Merges a neighbour's snapshot into the receiver's beliefs, then releases
/// the bundle from the first entry the receiver no longer wins.
inline MergeOutcome apply_message(const AgentState& receiver, const BeliefSnapshot& msg, Round round,
                                  const TaskTable& tasks) {
  if (msg.sender == receiver.id()) throw ContractViolation("apply_message: agent cannot message itself");
  if (msg.winners.size() != receiver.belief.winners.size() ||
      msg.timestamps.size() != receiver.belief.timestamps.size()) {
    throw ContractViolation("apply_message: snapshot shape does not match receiver");
  }

  AgentState state = receiver;
  BeliefState& b = state.belief;
  const AgentId i = state.id();
  const AgentId k = msg.sender;

  for (std::size_t j = 0; j < b.winners.size(); ++j) {
    switch (resolve(i, k, msg.winners[j], msg.bids[j], b.winners[j], b.bids[j], msg.timestamps, b.timestamps)) {
      case MergeAction::kUpdate:
        b.winners[j] = msg.winners[j];
        b.bids[j] = msg.bids[j];
        break;
      case MergeAction::kReset:
        b.clear(j);
        break;
      case MergeAction::kLeave:
        break;
    }
  }

  for (std::size_t m = 0; m < b.timestamps.size(); ++m) {
    b.timestamps[m] = std::max(b.timestamps[m], msg.timestamps[m]);
  }
  b.timestamps[static_cast<std::size_t>(k.value)] = round;
  b.timestamps[static_cast<std::size_t>(i.value)] = round;

  MergeOutcome out;
  std::optional<std::size_t> lost;
  for (std::size_t n = 0; n < state.bundle.size(); ++n) {
    if (b.winners[tasks.index_of(state.bundle[n])] != i) {
      lost = n;
      break;
    }
  }
  if (lost) {
    auto released = release_from(std::move(state), *lost, tasks);
    state = std::move(released.state);
    out.released = std::move(released.released);
  }
  out.changed = !(state == receiver);
  out.state = std::move(state);
  return out;
}

}  // namespace cbba

#endif  // CBBA_CONSENSUS_HPP
