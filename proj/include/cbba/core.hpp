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

#ifndef CBBA_CORE_HPP
#define CBBA_CORE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cbba {

//==============================================================================
// Errors

/// Malformed or out-of-domain user input (bad parameters, unknown ids).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

//==============================================================================
// Identifiers and scalars

struct AgentId {
  int value = -1;
  friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

struct TaskId {
  int value = -1;
  friend constexpr auto operator<=>(TaskId, TaskId) = default;
};

/// "Nobody wins this task."
inline constexpr AgentId kNoAgent{-1};

using Score = double;

/// Bid paired with kNoAgent. Orders below every finite score.
inline constexpr Score kNegInf = -std::numeric_limits<double>::infinity();

using Round = std::int64_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

//==============================================================================
// Specs

struct TaskSpec {
  TaskId id;
  Vec2 position;
  double reward = 1.0;
  double discount = 0.95;  // per unit of travel time
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct AgentSpec {
  AgentId id;
  Vec2 position;
  double speed = 1.0;
  int capacity = 1;  // maximum path length
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

inline void check_task(const TaskSpec& t) {
  if (!(t.discount > 0.0 && t.discount <= 1.0)) {
    throw InputError("task " + std::to_string(t.id.value) + ": discount must lie in (0, 1]");
  }
  if (!(t.reward >= 0.0) || !std::isfinite(t.reward)) {
    throw InputError("task " + std::to_string(t.id.value) + ": reward must be finite and >= 0");
  }
}

inline void check_agent(const AgentSpec& a) {
  if (!(a.speed > 0.0) || !std::isfinite(a.speed)) {
    throw InputError("agent " + std::to_string(a.id.value) + ": speed must be > 0");
  }
  if (a.capacity < 1) {
    throw InputError("agent " + std::to_string(a.id.value) + ": capacity must be >= 1");
  }
}

/// Tasks known to the team, in announcement order. Belief vectors are indexed
/// by position in this table; lookups by id go through the index.
class TaskTable {
 public:
  TaskTable() = default;
  explicit TaskTable(const std::vector<TaskSpec>& tasks) {
    for (const auto& t : tasks) add(t);
  }

  std::size_t add(const TaskSpec& task) {
    check_task(task);
    if (index_.count(task.id.value) != 0) {
      throw InputError("duplicate task id " + std::to_string(task.id.value));
    }
    index_.emplace(task.id.value, tasks_.size());
    tasks_.push_back(task);
    return tasks_.size() - 1;
  }

  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  const TaskSpec& operator[](std::size_t i) const { return tasks_[i]; }
  const std::vector<TaskSpec>& all() const { return tasks_; }

  bool contains(TaskId id) const { return index_.count(id.value) != 0; }

  std::size_t index_of(TaskId id) const {
    auto it = index_.find(id.value);
    if (it == index_.end()) throw InputError("unknown task id " + std::to_string(id.value));
    return it->second;
  }

  const TaskSpec& at(TaskId id) const { return tasks_[index_of(id)]; }

  friend bool operator==(const TaskTable& a, const TaskTable& b) { return a.tasks_ == b.tasks_; }

 private:
  std::vector<TaskSpec> tasks_;
  std::unordered_map<int, std::size_t> index_;
};

//==============================================================================
// Agent memory

/// Execution order of an agent's tasks.
using Path = std::vector<TaskId>;
/// The same tasks in the order they were bid on.
using Bundle = std::vector<TaskId>;

/// Winners, winning bids (both per task-table index) and per-agent freshness.
struct BeliefState {
  std::vector<AgentId> winners;
  std::vector<Score> bids;
  std::vector<Round> timestamps;

  BeliefState() = default;
  BeliefState(std::size_t n_tasks, std::size_t n_agents)
      : winners(n_tasks, kNoAgent), bids(n_tasks, kNegInf), timestamps(n_agents, 0) {}

  void grow_tasks(std::size_t n_tasks) {
    winners.resize(n_tasks, kNoAgent);
    bids.resize(n_tasks, kNegInf);
  }

  void clear(std::size_t task_index) {
    winners[task_index] = kNoAgent;
    bids[task_index] = kNegInf;
  }

  /// z == NONE exactly when y == NEG_INF, for every task.
  bool consistent() const {
    if (winners.size() != bids.size()) return false;
    for (std::size_t j = 0; j < winners.size(); ++j) {
      if ((winners[j] == kNoAgent) != (bids[j] == kNegInf)) return false;
    }
    return true;
  }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

/// Best way to insert one task into a path.
struct Insertion {
  std::size_t index = 0;
  Score gain = kNegInf;
  friend bool operator==(const Insertion&, const Insertion&) = default;
};

/// Raw insertion gains for every task, valid for one exact path. Pure
/// memoization: excluded from AgentState equality.
struct GainCache {
  Path path;
  std::size_t n_tasks = 0;
  bool valid = false;
  std::vector<Insertion> gains;
};

struct AgentState {
  AgentSpec spec;
  Path path;
  Bundle bundle;
  BeliefState belief;
  GainCache cache;

  AgentState() = default;
  AgentState(AgentSpec s, std::size_t n_tasks, std::size_t n_agents)
      : spec(s), belief(n_tasks, n_agents) {}

  AgentId id() const { return spec.id; }

  friend bool operator==(const AgentState& a, const AgentState& b) {
    return a.spec == b.spec && a.path == b.path && a.bundle == b.bundle && a.belief == b.belief;
  }
};

//==============================================================================
// Sequence edits

inline bool contains(const std::vector<TaskId>& seq, TaskId id) {
  return std::find(seq.begin(), seq.end(), id) != seq.end();
}

/// Inserts `id` before position `index`.
inline Path insert_at(const Path& path, TaskId id, std::size_t index, std::size_t capacity) {
  if (index > path.size()) throw ContractViolation("insert_at: index past end of path");
  if (contains(path, id)) throw ContractViolation("insert_at: task already in path");
  if (path.size() >= capacity) throw ContractViolation("insert_at: path at capacity");
  Path out;
  out.reserve(path.size() + 1);
  out.insert(out.end(), path.begin(), path.begin() + static_cast<std::ptrdiff_t>(index));
  out.push_back(id);
  out.insert(out.end(), path.begin() + static_cast<std::ptrdiff_t>(index), path.end());
  return out;
}

/// Removing an absent id is a no-op.
inline std::vector<TaskId> remove_task(std::vector<TaskId> seq, TaskId id) {
  seq.erase(std::remove(seq.begin(), seq.end(), id), seq.end());
  return seq;
}

//==============================================================================
// Scoring

/// Travel schedule along one path: where the agent is after each task and
/// when it got there, plus each task's discounted contribution.
class PathTimeline {
 public:
  PathTimeline(const AgentSpec& agent, const Path& path, const TaskTable& tasks)
      : agent_(agent), tasks_(tasks) {
    if (path.size() > static_cast<std::size_t>(agent.capacity)) {
      throw ContractViolation("path longer than agent capacity");
    }
    const std::size_t n = path.size();
    specs_.reserve(n);
    times_.reserve(n);
    terms_.reserve(n);
    Vec2 at = agent.position;
    double clock = 0.0;
    for (TaskId id : path) {
      const TaskSpec& t = tasks.at(id);
      clock += distance(at, t.position) / agent.speed;
      at = t.position;
      specs_.push_back(&t);
      times_.push_back(clock);
      terms_.push_back(std::pow(t.discount, clock) * t.reward);
      total_ += terms_.back();
    }
  }

  Score total() const { return total_; }
  std::size_t size() const { return specs_.size(); }

  /// Gain of inserting `candidate` before `index` (index == size() appends).
  Score gain_at(const TaskSpec& candidate, std::size_t index) const {
    const Vec2 prev = index == 0 ? agent_.position : specs_[index - 1]->position;
    const double start = index == 0 ? 0.0 : times_[index - 1];
    const double leg = distance(prev, candidate.position);
    Score gain = std::pow(candidate.discount, start + leg / agent_.speed) * candidate.reward;
    if (index < specs_.size()) {
      const Vec2 next = specs_[index]->position;
      const double delay = (leg + distance(candidate.position, next) - distance(prev, next)) / agent_.speed;
      for (std::size_t k = index; k < specs_.size(); ++k) {
        gain += terms_[k] * (std::pow(specs_[k]->discount, delay) - 1.0);
      }
    }
    return gain;
  }

  /// Best insertion point; ties go to the lowest index.
  Insertion best_insertion(const TaskSpec& candidate) const {
    Insertion best;
    for (std::size_t n = 0; n <= specs_.size(); ++n) {
      const Score g = gain_at(candidate, n);
      if (n == 0 || g > best.gain) best = {n, g};
    }
    return best;
  }

 private:
  const AgentSpec& agent_;
  const TaskTable& tasks_;
  std::vector<const TaskSpec*> specs_;
  std::vector<double> times_;
  std::vector<Score> terms_;
  Score total_ = 0.0;
};

/// Time-discounted path score: sum of discount^arrival_time * reward.
inline Score path_score(const AgentSpec& agent, const Path& path, const TaskTable& tasks) {
  return PathTimeline(agent, path, tasks).total();
}

inline Insertion marginal_insertion(const AgentSpec& agent, const Path& path, TaskId candidate,
                                    const TaskTable& tasks) {
  if (contains(path, candidate)) throw ContractViolation("marginal_insertion: candidate already in path");
  if (path.size() >= static_cast<std::size_t>(agent.capacity)) {
    throw ContractViolation("marginal_insertion: path at capacity");
  }
  return PathTimeline(agent, path, tasks).best_insertion(tasks.at(candidate));
}

/// Bundle and path hold the same set of tasks.
inline bool same_task_set(const Bundle& bundle, const Path& path) {
  if (bundle.size() != path.size()) return false;
  auto a = bundle;
  auto b = path;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace cbba

#endif  // CBBA_CORE_HPP
