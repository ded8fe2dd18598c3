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

#ifndef CBBA_HARNESS_HPP
#define CBBA_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cbba/core.hpp"
#include "cbba/netsim.hpp"
#include "cbba/replan.hpp"
#include "cbba/scenario.hpp"

namespace cbba {

/// The team failed to converge under the round ceiling.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, EventLog log) : std::runtime_error(what), log_(std::move(log)) {}
  const EventLog& log() const { return log_; }

 private:
  EventLog log_;
};

struct RunMetrics {
  std::int64_t initial_rounds = 0;
  Score initial_score = 0.0;
  std::vector<std::int64_t> arrival_rounds;
  std::vector<Score> score_before;
  std::vector<Score> score_after;
  std::vector<Score> deltas;
  std::uint64_t messages = 0;

  Score cumulative_delta() const { return std::accumulate(deltas.begin(), deltas.end(), 0.0); }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct ExperimentOptions {
  /// Per convergence phase; default 10 * n_t * D.
  std::optional<std::int64_t> round_ceiling;
};

struct ExperimentResult {
  RunMetrics metrics;
  WorldState final_world;
  WorldState static_world;  // after the initial allocation, before any arrival
  EventLog events;
};

inline std::int64_t default_round_ceiling(const WorldState& w) {
  const int d = w.agents.size() > 1 ? diameter(w.graph) : 1;
  return 10 * static_cast<std::int64_t>(std::max<std::size_t>(w.tasks.size(), 1)) * std::max(d, 1);
}

/// Runs rounds until converged; returns how many rounds it took.
inline std::int64_t run_until_converged(WorldState& world, const ResetStrategy& strategy,
                                        std::optional<std::int64_t> ceiling = std::nullopt) {
  const std::int64_t limit = ceiling.value_or(default_round_ceiling(world));
  std::int64_t rounds = 0;
  for (;;) {
    WorldState next;
    if (is_converged(world, strategy, &next)) {
      mark_converged(world);
      return rounds;
    }
    if (rounds >= limit) {
      std::ostringstream msg;
      msg << "no convergence within " << limit << " rounds (strategy " << to_string(strategy.kind)
          << ", " << world.tasks.size() << " tasks, round " << world.round << ")";
      throw NonConvergenceError(msg.str(), world.events ? *world.events : EventLog{});
    }
    world = std::move(next);
    ++rounds;
  }
}

inline WorldState make_world(const Scenario& s) {
  return make_world(s.agents, TaskTable(s.tasks), build_topology(s));
}

/// Static allocation to convergence, then each arrival revealed at
/// convergence and re-converged.
inline ExperimentResult run_experiment(const Scenario& s, ResetKind kind, const ExperimentOptions& options = {}) {
  check_scenario(s);
  WorldState world = make_world(s);
  world.events = std::make_shared<EventLog>();

  ExperimentResult out;
  RunMetrics& m = out.metrics;
  const ResetStrategy initial{kind, s.params};
  m.initial_rounds = run_until_converged(world, initial, options.round_ceiling);
  m.initial_score = team_score(world);
  out.static_world = world;

  for (std::size_t k = 0; k < s.arrivals.size(); ++k) {
    const ResetStrategy strategy{kind, s.params_for(k)};
    const Score before = team_score(world);
    announce_task(world, s.arrivals[k].task, strategy);
    m.arrival_rounds.push_back(run_until_converged(world, strategy, options.round_ceiling));
    const Score after = team_score(world);
    m.score_before.push_back(before);
    m.score_after.push_back(after);
    m.deltas.push_back(after - before);
  }
  m.messages = world.messages;
  out.events = *world.events;
  out.final_world = std::move(world);
  out.final_world.events.reset();
  out.static_world.events.reset();
  return out;
}

/// Team score after minus team score before.
inline Score score_delta(const WorldState& before, const WorldState& after) {
  return team_score(after) - team_score(before);
}

//==============================================================================
// Validation

struct ConstraintCheck {
  bool pass = true;
  bool checked = true;
  std::vector<int> offenders;  // agent ids or task ids, per constraint
  std::string detail;
};

struct ValidationReport {
  ConstraintCheck capacity;     // offenders: agent ids
  ConstraintCheck uniqueness;   // offenders: task ids
  ConstraintCheck fill;         // offenders: none; see detail
  ConstraintCheck agreement;    // offenders: agent ids

  bool ok() const { return capacity.pass && uniqueness.pass && fill.pass && agreement.pass; }

  std::string summary() const {
    std::ostringstream os;
    auto line = [&](const char* name, const ConstraintCheck& c) {
      os << name << ": " << (!c.checked ? "skipped" : c.pass ? "pass" : "FAIL");
      if (!c.offenders.empty()) {
        os << " [";
        for (std::size_t i = 0; i < c.offenders.size(); ++i) os << (i ? "," : "") << c.offenders[i];
        os << "]";
      }
      if (!c.detail.empty()) os << " (" << c.detail << ")";
      os << "\n";
    };
    line("capacity", capacity);
    line("uniqueness", uniqueness);
    line("fill", fill);
    line("agreement", agreement);
    return os.str();
  }
};

/// Checks the allocation constraints against a converged world.
inline ValidationReport validate_assignment(const WorldState& world) {
  ValidationReport r;

  std::map<TaskId, int> holders;
  for (const auto& a : world.agents) {
    if (a.path.size() > static_cast<std::size_t>(a.spec.capacity)) r.capacity.offenders.push_back(a.id().value);
    for (TaskId t : a.path) ++holders[t];
  }
  r.capacity.pass = r.capacity.offenders.empty();

  for (auto [t, n] : holders) {
    if (n > 1) r.uniqueness.offenders.push_back(t.value);
  }
  r.uniqueness.pass = r.uniqueness.offenders.empty();

  const bool positive = std::all_of(world.tasks.all().begin(), world.tasks.all().end(),
                                     [](const TaskSpec& t) { return t.reward > 0.0; });
  r.fill.checked = positive && world.graph.connected();
  if (r.fill.checked) {
    std::size_t slots = 0;
    for (const auto& a : world.agents) slots += static_cast<std::size_t>(a.spec.capacity);
    const std::size_t expected = std::min(slots, world.tasks.size());
    r.fill.pass = holders.size() == expected;
    r.fill.detail = std::to_string(holders.size()) + " allocated, expected " + std::to_string(expected);
  }

  if (!world.agents.empty()) {
    const BeliefState& ref = world.agents.front().belief;
    for (const auto& a : world.agents) {
      bool ok = a.belief.winners == ref.winners && a.belief.bids == ref.bids && a.belief.consistent() &&
                same_task_set(a.bundle, a.path);
      for (TaskId t : a.bundle) {
        ok = ok && a.belief.winners[world.tasks.index_of(t)] == a.id();
      }
      for (std::size_t j = 0; ok && j < world.tasks.size(); ++j) {
        if (a.belief.winners[j] == a.id() && !contains(a.path, world.tasks[j].id)) ok = false;
      }
      if (!ok) r.agreement.offenders.push_back(a.id().value);
    }
  }
  r.agreement.pass = r.agreement.offenders.empty();
  return r;
}

//==============================================================================
// Monte Carlo

struct MonteCarloConfig {
  std::vector<std::uint64_t> seeds;
  std::vector<ResetKind> strategies;
  GeneratorConfig generator;  // seed overwritten per run
  ExperimentOptions options;
  unsigned threads = 0;       // 0: hardware concurrency
};

struct RunRecord {
  std::uint64_t seed = 0;
  ResetKind strategy = ResetKind::kNone;
  std::uint64_t scenario_hash = 0;
  RunMetrics metrics;
};

struct Stats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

inline Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

struct StrategyAggregate {
  ResetKind strategy = ResetKind::kNone;
  Stats static_rounds;
  Stats arrival_rounds;    // over every arrival of every run
  Stats cumulative_delta;  // per run
  std::vector<double> arrival_round_samples;
  std::vector<double> cumulative_delta_samples;
};

struct MonteCarloResult {
  std::vector<RunRecord> runs;  // seed-major, strategies in config order
  std::vector<StrategyAggregate> aggregates;

  const StrategyAggregate& aggregate(ResetKind k) const {
    for (const auto& a : aggregates) {
      if (a.strategy == k) return a;
    }
    throw InputError("no aggregate for strategy " + to_string(k));
  }
};

inline std::vector<StrategyAggregate> aggregate_runs(const std::vector<RunRecord>& runs,
                                                     const std::vector<ResetKind>& strategies) {
  std::vector<StrategyAggregate> out;
  for (ResetKind k : strategies) {
    StrategyAggregate agg;
    agg.strategy = k;
    std::vector<double> statics;
    for (const auto& r : runs) {
      if (r.strategy != k) continue;
      statics.push_back(static_cast<double>(r.metrics.initial_rounds));
      for (auto n : r.metrics.arrival_rounds) agg.arrival_round_samples.push_back(static_cast<double>(n));
      agg.cumulative_delta_samples.push_back(r.metrics.cumulative_delta());
    }
    agg.static_rounds = stats_of(statics);
    agg.arrival_rounds = stats_of(agg.arrival_round_samples);
    agg.cumulative_delta = stats_of(agg.cumulative_delta_samples);
    out.push_back(std::move(agg));
  }
  return out;
}

/// Every (seed, strategy) pair on the scenario generated for that seed.
/// Runs are independent and may execute on several threads; results are
/// ordered deterministically regardless.
inline MonteCarloResult monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.seeds.empty()) throw InputError("monte_carlo: need at least one seed");
  if (cfg.strategies.empty()) throw InputError("monte_carlo: need at least one strategy");

  const std::size_t n_jobs = cfg.seeds.size() * cfg.strategies.size();
  std::vector<RunRecord> runs(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::uint64_t seed = cfg.seeds[job / cfg.strategies.size()];
      const ResetKind kind = cfg.strategies[job % cfg.strategies.size()];
      try {
        GeneratorConfig g = cfg.generator;
        g.seed = seed;
        const Scenario s = generate_scenario(g);
        runs[job] = {seed, kind, scenario_hash(s), run_experiment(s, kind, cfg.options).metrics};
      } catch (const NonConvergenceError& e) {
        errors[job] = std::make_exception_ptr(NonConvergenceError(
            "seed " + std::to_string(seed) + ", strategy " + to_string(kind) + ": " + e.what(), e.log()));
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MonteCarloResult out;
  out.aggregates = aggregate_runs(runs, cfg.strategies);
  out.runs = std::move(runs);
  return out;
}

//==============================================================================
// Emission

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// One row per (seed, strategy, arrival). Arrival 0 is the initial static
/// allocation; its before/delta columns are empty.
inline void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "seed,strategy,scenario_hash,arrival,rounds,score_before,score_after,delta\n";
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    os << r.seed << ',' << to_string(r.strategy) << ',' << hex(r.scenario_hash) << ",0," << m.initial_rounds << ",,"
       << format_double(m.initial_score) << ",\n";
    for (std::size_t k = 0; k < m.arrival_rounds.size(); ++k) {
      os << r.seed << ',' << to_string(r.strategy) << ',' << hex(r.scenario_hash) << ',' << (k + 1) << ','
         << m.arrival_rounds[k] << ',' << format_double(m.score_before[k]) << ',' << format_double(m.score_after[k])
         << ',' << format_double(m.deltas[k]) << '\n';
    }
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<StrategyAggregate>& aggs) {
  os << "strategy,metric,count,mean,min,max\n";
  for (const auto& a : aggs) {
    auto row = [&](const char* name, const Stats& s) {
      os << to_string(a.strategy) << ',' << name << ',' << s.count << ',' << format_double(s.mean) << ','
         << format_double(s.min) << ',' << format_double(s.max) << '\n';
    };
    row("static_rounds", a.static_rounds);
    row("arrival_rounds", a.arrival_rounds);
    row("cumulative_delta", a.cumulative_delta);
  }
}

namespace detail {

struct Box {
  double lo, q1, med, q3, hi;
};

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return i + 1 < xs.size() ? xs[i] * (1 - frac) + xs[i + 1] * frac : xs[i];
}

inline Box box_of(const std::vector<double>& xs) {
  if (xs.empty()) return {0, 0, 0, 0, 0};
  return {quantile(xs, 0.0), quantile(xs, 0.25), quantile(xs, 0.5), quantile(xs, 0.75), quantile(xs, 1.0)};
}

}  // namespace detail

/// Two box-plot panels (reconvergence rounds, cumulative score delta) as SVG.
inline void write_boxplot_svg(std::ostream& os, const std::vector<StrategyAggregate>& aggs) {
  constexpr double kPanelW = 420, kPanelH = 300, kMargin = 50;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanelW + kMargin << "\" height=\""
     << kPanelH + 2 * kMargin << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  auto panel = [&](double x0, const char* title, auto samples_of) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& a : aggs) {
      for (double v : samples_of(a)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!(hi > lo)) {
      lo = std::isfinite(lo) ? lo - 1 : 0;
      hi = lo + 2;
    }
    auto ypix = [&](double v) { return kMargin + kPanelH - (v - lo) / (hi - lo) * kPanelH; };
    os << "<text x=\"" << x0 + kPanelW / 2 << "\" y=\"" << kMargin / 2 << "\" text-anchor=\"middle\">" << title
       << "</text>\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << kMargin << "\" x2=\"" << x0 << "\" y2=\"" << kMargin + kPanelH
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x0 - 4 << "\" y=\"" << ypix(hi) << "\" text-anchor=\"end\">" << format_double(hi)
       << "</text>\n<text x=\"" << x0 - 4 << "\" y=\"" << ypix(lo) << "\" text-anchor=\"end\">" << format_double(lo)
       << "</text>\n";
    const double slot = kPanelW / static_cast<double>(std::max<std::size_t>(aggs.size(), 1));
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      const auto b = detail::box_of(samples_of(aggs[i]));
      const double cx = x0 + slot * (static_cast<double>(i) + 0.5), w = slot * 0.5;
      os << "<line x1=\"" << cx << "\" y1=\"" << ypix(b.lo) << "\" x2=\"" << cx << "\" y2=\"" << ypix(b.hi)
         << "\" stroke=\"black\"/>\n";
      os << "<rect x=\"" << cx - w / 2 << "\" y=\"" << ypix(b.q3) << "\" width=\"" << w << "\" height=\""
         << std::max(ypix(b.q1) - ypix(b.q3), 0.5) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
      os << "<line x1=\"" << cx - w / 2 << "\" y1=\"" << ypix(b.med) << "\" x2=\"" << cx + w / 2 << "\" y2=\""
         << ypix(b.med) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << cx << "\" y=\"" << kMargin + kPanelH + 16 << "\" text-anchor=\"middle\">"
         << to_string(aggs[i].strategy) << "</text>\n";
    }
  };
  panel(kMargin, "rounds to reconverge per arrival",
        [](const StrategyAggregate& a) -> const std::vector<double>& { return a.arrival_round_samples; });
  panel(kMargin + kPanelW + kMargin / 2, "cumulative score delta per run",
        [](const StrategyAggregate& a) -> const std::vector<double>& { return a.cumulative_delta_samples; });
  os << "</svg>\n";
}

/// One JSON object per line.
inline void write_event_log(std::ostream& os, const EventLog& log) {
  for (const auto& e : log) {
    nlohmann::json j{{"round", e.round},       {"agent", e.agent.value},           {"task", e.task.value},
                     {"old_winner", e.old_winner.value}, {"new_winner", e.new_winner.value}};
    j["old_bid"] = e.old_bid == kNegInf ? nlohmann::json(nullptr) : nlohmann::json(e.old_bid);
    j["new_bid"] = e.new_bid == kNegInf ? nlohmann::json(nullptr) : nlohmann::json(e.new_bid);
    os << j.dump() << '\n';
  }
}

}  // namespace cbba

#endif  // CBBA_HARNESS_HPP
