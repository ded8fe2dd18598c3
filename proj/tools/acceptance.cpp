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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Seeds, sizes and tolerances are fixed below.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cbba/cbba.hpp"

using namespace cbba;

namespace {

constexpr std::uint64_t kStaticCorpusSeed = 20260101;
constexpr int kStaticInstances = 200;
constexpr double kBidTolerance = 1e-9;
constexpr double kStaticTimeLimitSeconds = 60.0;

constexpr std::uint64_t kArrivalCorpusSeed = 20260202;
constexpr int kArrivalInstances = 100;
constexpr int kTeamResetCounts[] = {2, 4, 8};

constexpr int kSweepSeeds = 30;
constexpr double kSweepTimeLimitSeconds = 600.0;
constexpr double kTeamGapFraction = 0.5;

constexpr std::uint64_t kMicroSeed = 20260303;
constexpr int kInsertionChecks = 1000;
constexpr double kInsertionTolerance = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  verdicts.push_back({id, name, pass, detail});
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << name << " -- " << detail << std::endl;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(1);
  os << v;
  return os.str();
}

//------------------------------------------------------------------------------
// Invariant bookkeeping shared by every run.

struct InvariantTally {
  std::mutex mu;
  long worlds = 0;
  long replays = 0;
  std::vector<std::string> failures;

  void fail(const std::string& what) {
    std::lock_guard lock(mu);
    if (failures.size() < 10) failures.push_back(what);
    else if (failures.size() == 10) failures.push_back("...");
  }
};

InvariantTally invariants;

bool world_invariants(const WorldState& w, std::string& why) {
  const ValidationReport v = validate_assignment(w);
  if (!v.ok()) {
    why = v.summary();
    return false;
  }
  for (const auto& a : w.agents) {
    if (!a.belief.consistent()) {
      why = "z/y inconsistent at agent " + std::to_string(a.id().value);
      return false;
    }
    for (std::size_t n = 1; n < a.bundle.size(); ++n) {
      if (a.belief.bids[w.tasks.index_of(a.bundle[n])] > a.belief.bids[w.tasks.index_of(a.bundle[n - 1])]) {
        why = "bundle bids increase at agent " + std::to_string(a.id().value);
        return false;
      }
    }
  }
  return true;
}

std::string temp_file(const std::string& tag) {
  std::ostringstream name;
  name << "cbba_accept_" << tag << "_" << std::this_thread::get_id() << ".json";
  return (std::filesystem::temp_directory_path() / name.str()).string();
}

/// Validates both converged worlds of a run and replays it from a saved
/// scenario file.
void check_run(const Scenario& s, ResetKind k, const ExperimentResult& r, const std::string& label) {
  std::string why;
  if (!world_invariants(r.static_world, why)) invariants.fail(label + " static: " + why);
  if (!world_invariants(r.final_world, why)) invariants.fail(label + " final: " + why);
  const std::string path = temp_file(std::to_string(static_cast<int>(k)));
  save_scenario(s, path);
  const ExperimentResult again = run_experiment(load_scenario(path), k);
  std::filesystem::remove(path);
  if (!(again.metrics == r.metrics)) invariants.fail(label + ": replay metrics differ");
  std::lock_guard lock(invariants.mu);
  invariants.worlds += 2;
  invariants.replays += 1;
}

//------------------------------------------------------------------------------
// Criteria 1 and 2

void static_corpus() {
  std::mt19937_64 rng(kStaticCorpusSeed);
  int mismatches = 0, over_bound = 0, runs = 0;
  std::string first_mismatch, first_over;
  double secs = 0.0;  // excludes the invariant and replay checks
  for (int inst = 0; inst < kStaticInstances; ++inst) {
    const auto t0 = Clock::now();
    GeneratorConfig g;
    g.seed = rng();
    g.n_agents = 2 + static_cast<int>(rng() % 4);
    g.n_tasks = 4 + static_cast<int>(rng() % 12);
    g.capacity = 1 + static_cast<int>(rng() % 4);
    g.n_arrivals = 0;
    g.topology = static_cast<TopologyKind>(rng() % 3);
    g.n_reset = g.n_agents;
    const Scenario s = generate_scenario(g);
    const SgaSolution sga = sga_solve(s.agents, TaskTable(s.tasks));
    const int d = diameter(build_topology(s));

    std::vector<ExperimentResult> results;
    for (ResetKind k : kAllResetKinds) results.push_back(run_experiment(s, k));
    secs += seconds_since(t0);

    for (std::size_t ki = 0; ki < results.size(); ++ki) {
      const ResetKind k = kAllResetKinds[ki];
      const ExperimentResult& r = results[ki];
      ++runs;
      const WorldState& w = r.static_world;
      bool same = true;
      std::size_t assigned = 0;
      for (AgentId z : w.agents.front().belief.winners) assigned += z != kNoAgent;
      same = assigned == sga.sequence.size();
      for (const auto& step : sga.sequence) {
        const std::size_t j = w.tasks.index_of(step.task);
        for (const auto& a : w.agents) {
          same = same && a.belief.winners[j] == step.agent && std::abs(a.belief.bids[j] - step.bid) <= kBidTolerance;
        }
      }
      for (std::size_t i = 0; i < w.agents.size(); ++i) same = same && w.agents[i].path == sga.paths[i];
      const std::string label = "instance " + std::to_string(inst) + " " + to_string(k);
      if (!same && mismatches++ == 0) first_mismatch = label;
      if (r.metrics.initial_rounds > static_cast<std::int64_t>(g.n_tasks) * d + d && over_bound++ == 0) {
        first_over = label + " took " + std::to_string(r.metrics.initial_rounds) + " rounds";
      }
      check_run(s, k, r, label);
    }
  }
  report(1, "SGA equivalence", mismatches == 0 && secs < kStaticTimeLimitSeconds,
         std::to_string(kStaticInstances) + " instances x 4 strategies, " + std::to_string(mismatches) +
             " mismatches (bid tol " + sci(kBidTolerance) + "), " + fmt(secs, 1) + " s (limit " +
             fmt(kStaticTimeLimitSeconds, 0) + " s)" + (first_mismatch.empty() ? "" : "; first: " + first_mismatch));
  report(2, "static convergence within n_t*D + D rounds", over_bound == 0,
         std::to_string(runs) + " runs, " + std::to_string(over_bound) + " over the bound" +
             (first_over.empty() ? "" : "; first: " + first_over));
}

//------------------------------------------------------------------------------
// Criteria 3 and 4

void arrival_corpus() {
  std::mt19937_64 rng(kArrivalCorpusSeed);
  int none_over = 0, team_over = 0, team_runs = 0;
  std::int64_t worst_none_margin = std::numeric_limits<std::int64_t>::min();
  std::string first_none, first_team;
  for (int inst = 0; inst < kArrivalInstances; ++inst) {
    GeneratorConfig g;
    g.seed = rng();
    g.n_agents = 2 + static_cast<int>(rng() % 7);
    g.n_tasks = 4 + static_cast<int>(rng() % 27);
    g.n_arrivals = 1;
    g.topology = static_cast<TopologyKind>(rng() % 4);
    g.radius = 0.6;
    g.n_reset = 2;
    const Scenario base = generate_scenario(g);
    const int d = diameter(build_topology(base));
    const std::string label = "instance " + std::to_string(inst);

    const ExperimentResult none = run_experiment(base, ResetKind::kNone);
    check_run(base, ResetKind::kNone, none, label + " none");
    const std::int64_t rounds = none.metrics.arrival_rounds.at(0);
    worst_none_margin = std::max(worst_none_margin, rounds - 2 * d);
    if (rounds > 2 * d && none_over++ == 0) {
      first_none = label + ": " + std::to_string(rounds) + " rounds, D = " + std::to_string(d);
    }

    for (int n_reset : kTeamResetCounts) {
      Scenario s = base;
      s.params.n_reset = n_reset;
      const ExperimentResult team = run_experiment(s, ResetKind::kPartialTeam);
      check_run(s, ResetKind::kPartialTeam, team, label + " partial-team n_reset=" + std::to_string(n_reset));
      ++team_runs;
      const std::int64_t t = team.metrics.arrival_rounds.at(0);
      if (t > static_cast<std::int64_t>(n_reset + 1) * d + d && team_over++ == 0) {
        first_team = label + " n_reset=" + std::to_string(n_reset) + ": " + std::to_string(t) + " rounds, D = " +
                     std::to_string(d);
      }
    }
  }
  report(3, "no-reset arrival within 2*D rounds", none_over == 0,
         std::to_string(kArrivalInstances) + " arrivals, " + std::to_string(none_over) + " over, worst rounds-2D = " +
             std::to_string(worst_none_margin) + (first_none.empty() ? "" : "; first: " + first_none));
  report(4, "partial-team arrival within (n_reset+1)*D + D rounds", team_over == 0,
         std::to_string(team_runs) + " runs (n_reset in {2,4,8}), " + std::to_string(team_over) + " over" +
             (first_team.empty() ? "" : "; first: " + first_team));
}

//------------------------------------------------------------------------------
// Criteria 5 and 6

void sweep() {
  MonteCarloConfig cfg;
  for (int s = 1; s <= kSweepSeeds; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  cfg.strategies.assign(std::begin(kAllResetKinds), std::end(kAllResetKinds));
  cfg.generator = baseline_preset();
  const auto t0 = Clock::now();
  const MonteCarloResult mc = monte_carlo(cfg);
  const double secs = seconds_since(t0);

  // Replay and validate every sweep run on the same thread budget.
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < mc.runs.size(); i = next++) {
        const RunRecord& rec = mc.runs[i];
        GeneratorConfig g = cfg.generator;
        g.seed = rec.seed;
        const Scenario s = generate_scenario(g);
        const ExperimentResult r = run_experiment(s, rec.strategy);
        const std::string label = "sweep seed " + std::to_string(rec.seed) + " " + to_string(rec.strategy);
        if (!(r.metrics == rec.metrics)) invariants.fail(label + ": rerun differs from Monte Carlo record");
        check_run(s, rec.strategy, r, label);
      }
    });
  }
  for (auto& t : pool) t.join();

  const double none = mc.aggregate(ResetKind::kNone).arrival_rounds.mean;
  const double local = mc.aggregate(ResetKind::kPartialLocal).arrival_rounds.mean;
  const double team = mc.aggregate(ResetKind::kPartialTeam).arrival_rounds.mean;
  const double full = mc.aggregate(ResetKind::kFull).arrival_rounds.mean;
  report(5, "reconvergence ordering none < partial-team < full, partial-local < full",
         none < team && team < full && local < full && secs < kSweepTimeLimitSeconds,
         "mean rounds none " + fmt(none) + ", partial-local " + fmt(local) + ", partial-team " + fmt(team) + ", full " +
             fmt(full) + " over " + std::to_string(kSweepSeeds) + " seeds x 8 arrivals; sweep " + fmt(secs, 1) +
             " s (limit " + fmt(kSweepTimeLimitSeconds, 0) + " s)");

  const double d_none = mc.aggregate(ResetKind::kNone).cumulative_delta.mean;
  const double d_team = mc.aggregate(ResetKind::kPartialTeam).cumulative_delta.mean;
  const double d_full = mc.aggregate(ResetKind::kFull).cumulative_delta.mean;
  const double gap = d_full - d_none;
  const double share = gap > 0 ? (d_team - d_none) / gap : 0.0;
  report(6, "score delta none <= partial-team <= full, team closes >= 50% of gap",
         d_none <= d_team && d_team <= d_full && share >= kTeamGapFraction,
         "mean cumulative delta none " + fmt(d_none, 4) + ", partial-team " + fmt(d_team, 4) + ", full " +
             fmt(d_full, 4) + "; partial-team share of gap " + fmt(100 * share, 1) + "% (need >= " +
             fmt(100 * kTeamGapFraction, 0) + "%)");
}

//------------------------------------------------------------------------------
// Criterion 8 oracles, kept local so they share nothing with the library.

double brute_score(const AgentSpec& a, const Path& p, const TaskTable& tasks) {
  double x = a.position.x, y = a.position.y, t = 0, s = 0;
  for (TaskId id : p) {
    const TaskSpec& task = tasks.at(id);
    t += std::hypot(task.position.x - x, task.position.y - y) / a.speed;
    x = task.position.x;
    y = task.position.y;
    s += std::pow(task.discount, t) * task.reward;
  }
  return s;
}

Path with(const Path& p, TaskId id, std::size_t at) {
  Path q = p;
  q.insert(q.begin() + static_cast<std::ptrdiff_t>(at), id);
  return q;
}

struct Instance {
  std::vector<AgentSpec> agents;
  TaskTable tasks;
};

Instance random_instance(std::mt19937_64& rng, int n_r, int n_t, int cap) {
  Instance in;
  for (int i = 0; i < n_r; ++i) in.agents.push_back({AgentId{i}, {100 * unit_uniform(rng), 100 * unit_uniform(rng)}, 1.0, cap});
  for (int j = 0; j < n_t; ++j) in.tasks.add({TaskId{j}, {100 * unit_uniform(rng), 100 * unit_uniform(rng)}});
  return in;
}

void micro_oracles() {
  std::mt19937_64 rng(kMicroSeed);
  int insertion_bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < kInsertionChecks; ++trial) {
    const Instance in = random_instance(rng, 1, 5, 5);
    std::vector<TaskId> ids;
    for (const auto& t : in.tasks.all()) ids.push_back(t.id);
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t len = rng() % 5;
    const Path p(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(len));
    const TaskId cand = ids[len];
    const double base = brute_score(in.agents[0], p, in.tasks);
    double best = -INFINITY;
    std::vector<double> gains;
    for (std::size_t n = 0; n <= p.size(); ++n) {
      gains.push_back(brute_score(in.agents[0], with(p, cand, n), in.tasks) - base);
      best = std::max(best, gains.back());
    }
    const Insertion got = marginal_insertion(in.agents[0], p, cand, in.tasks);
    const double err = std::max(std::abs(got.gain - best), std::abs(gains[got.index] - best));
    worst = std::max(worst, err);
    if (err > kInsertionTolerance) ++insertion_bad;
  }

  // Exhaustive greedy enumeration over (agent, task, position).
  int sga_bad = 0, sga_total = 0;
  for (int n_r = 1; n_r <= 3; ++n_r) {
    for (int n_t = 1; n_t <= 5; ++n_t) {
      for (int cap = 1; cap <= 3; ++cap) {
        for (int rep = 0; rep < 20; ++rep) {
          const Instance in = random_instance(rng, n_r, n_t, cap);
          std::vector<Path> paths(static_cast<std::size_t>(n_r));
          std::vector<double> floors(static_cast<std::size_t>(n_r), INFINITY);
          std::vector<bool> taken(static_cast<std::size_t>(n_t), false);
          std::vector<SgaStep> steps;
          for (;;) {
            bool found = false;
            SgaStep best{};
            std::size_t best_a = 0, best_at = 0;
            for (std::size_t a = 0; a < paths.size(); ++a) {
              if (paths[a].size() >= static_cast<std::size_t>(cap)) continue;
              const double base = brute_score(in.agents[a], paths[a], in.tasks);
              for (std::size_t j = 0; j < taken.size(); ++j) {
                if (taken[j]) continue;
                for (std::size_t n = 0; n <= paths[a].size(); ++n) {
                  const double c =
                      std::min(brute_score(in.agents[a], with(paths[a], in.tasks[j].id, n), in.tasks) - base, floors[a]);
                  if (!(c > 0)) continue;
                  // Strict comparison keeps the first candidate in (agent, task, position) order.
                  if (!found || c > best.bid) {
                    found = true;
                    best = {in.tasks[j].id, in.agents[a].id, c};
                    best_a = a;
                    best_at = n;
                  }
                }
              }
            }
            if (!found) break;
            paths[best_a] = with(paths[best_a], best.task, best_at);
            floors[best_a] = best.bid;
            taken[in.tasks.index_of(best.task)] = true;
            steps.push_back(best);
          }
          const SgaSolution s = sga_solve(in.agents, in.tasks);
          bool ok = s.sequence.size() == steps.size() && s.paths == paths;
          for (std::size_t n = 0; ok && n < steps.size(); ++n) {
            ok = s.sequence[n].task == steps[n].task && s.sequence[n].agent == steps[n].agent &&
                 std::abs(s.sequence[n].bid - steps[n].bid) <= kInsertionTolerance;
          }
          sga_bad += !ok;
          ++sga_total;
        }
      }
    }
  }
  report(8, "oracle micro-tests", insertion_bad == 0 && sga_bad == 0,
         std::to_string(kInsertionChecks) + " insertions (worst error " + sci(worst) + ", tol 1e-12), " +
             std::to_string(insertion_bad) + " bad; " + std::to_string(sga_total) +
             " SGA instances (n_r<=3, n_t<=5), " + std::to_string(sga_bad) + " mismatches");
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    static_corpus();
    arrival_corpus();
    sweep();
    {
      std::string detail = std::to_string(invariants.worlds) + " converged worlds validated, " +
                           std::to_string(invariants.replays) + " replays from saved scenarios";
      for (const auto& f : invariants.failures) detail += "; " + f;
      report(7, "invariants and exact replay on every run", invariants.failures.empty(), detail);
    }
    micro_oracles();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  int failed = 0;
  for (const auto& v : verdicts) failed += !v.pass;
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << " (" << verdicts.size()
            << " criteria, " << fmt(seconds_since(t0), 1) << " s)" << std::endl;
  return failed == 0 ? 0 : 1;
}
