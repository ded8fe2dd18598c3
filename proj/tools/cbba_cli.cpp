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

// Command-line front end: generate, run, compare, validate.
//
// Exit codes: 0 success, 1 usage or other error, 2 parse error,
// 3 non-convergence, 4 validation failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbba/cbba.hpp"

namespace {

using namespace cbba;

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kNoConvergence = 3, kInvalid = 4 };

struct GeneratorFlags {
  GeneratorConfig cfg;
  std::string preset = "baseline";
  std::optional<int> capacity;
  std::string topology = "complete";
};

void add_generator_flags(CLI::App* cmd, GeneratorFlags& f) {
  cmd->add_option("--preset", f.preset, "Starting point: baseline (L_t from counts) or constrained (L_t = 10)")
      ->check(CLI::IsMember({"baseline", "constrained"}));
  cmd->add_option("--agents", f.cfg.n_agents, "Number of agents")->check(CLI::PositiveNumber);
  cmd->add_option("--tasks", f.cfg.n_tasks, "Initial tasks")->check(CLI::NonNegativeNumber);
  cmd->add_option("--arrivals", f.cfg.n_arrivals, "Tasks revealed one at a time after convergence")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--area", f.cfg.area, "Side of the square area")->check(CLI::PositiveNumber);
  cmd->add_option("--capacity", f.capacity, "L_t, tasks per agent (default: ceil((tasks+arrivals)/agents)+1)");
  cmd->add_option("--discount", f.cfg.discount, "Per-time-unit discount in (0, 1]");
  cmd->add_option("--reward", f.cfg.reward, "Task reward");
  cmd->add_option("--speed", f.cfg.speed, "Agent speed");
  cmd->add_option("--topology", f.topology, "complete, line, ring or random-geometric")
      ->check(CLI::IsMember({"complete", "line", "ring", "random-geometric"}));
  cmd->add_option("--radius", f.cfg.radius, "Link radius for random-geometric graphs (unit square)");
  cmd->add_option("--n-reset", f.cfg.n_reset, "Team-wide reset count; per-agent count is n_reset / agents");
}

GeneratorConfig resolve(const GeneratorFlags& f, std::uint64_t seed) {
  GeneratorConfig g = f.preset == "constrained" ? constrained_preset(seed) : baseline_preset(seed);
  // Explicit flags override the preset.
  g.n_agents = f.cfg.n_agents;
  g.n_tasks = f.cfg.n_tasks;
  g.n_arrivals = f.cfg.n_arrivals;
  g.area = f.cfg.area;
  g.discount = f.cfg.discount;
  g.reward = f.cfg.reward;
  g.speed = f.cfg.speed;
  g.radius = f.cfg.radius;
  g.n_reset = f.cfg.n_reset;
  if (f.capacity) g.capacity = f.capacity;
  g.topology = topology_from_string(f.topology);
  return g;
}

struct StrategyFlags {
  std::optional<int> n_reset;
  std::optional<int> n_i_reset;
  std::optional<double> t_response;
  std::optional<double> delta_comm;
  std::optional<int> subteam;
};

void add_strategy_flags(CLI::App* cmd, StrategyFlags& f) {
  cmd->add_option("--n-reset", f.n_reset, "Override team-wide reset count");
  cmd->add_option("--n-i-reset", f.n_i_reset, "Override per-agent reset count");
  cmd->add_option("--t-response", f.t_response, "Response budget; derives n_reset = floor(t / (d * delta_comm))");
  cmd->add_option("--delta-comm", f.delta_comm, "Time per communication round");
  cmd->add_option("--subteam", f.subteam, "Restrict a partial-team replan to this many agents near the new task");
}

void apply(const StrategyFlags& f, Scenario& s) {
  auto patch = [&](StrategyParams& p) {
    if (f.n_reset) p.n_reset = *f.n_reset;
    if (f.n_i_reset) p.n_i_reset = *f.n_i_reset;
    if (f.t_response) p.t_response = *f.t_response;
    if (f.delta_comm) p.delta_comm = *f.delta_comm;
    if (f.subteam) p.subteam_size = *f.subteam;
  };
  patch(s.params);
  for (auto& a : s.arrivals) {
    if (a.params) patch(*a.params);
  }
  s.params.check();
}

template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write(out);
}

void print_metrics(std::ostream& os, const Scenario& s, ResetKind kind, const RunMetrics& m) {
  os << "scenario " << hex(scenario_hash(s)) << "  strategy " << to_string(kind) << "\n";
  os << "initial: " << m.initial_rounds << " rounds, score " << format_double(m.initial_score) << "\n";
  for (std::size_t k = 0; k < m.arrival_rounds.size(); ++k) {
    os << "arrival " << (k + 1) << " (task " << s.arrivals[k].task.id.value << "): " << m.arrival_rounds[k]
       << " rounds, delta " << format_double(m.deltas[k]) << "\n";
  }
  os << "cumulative delta " << format_double(m.cumulative_delta()) << ", messages " << m.messages << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized task allocation with bundle consensus and partial replanning"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Create a scenario file");
  GeneratorFlags gen_flags;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "-";
  gen->add_option("--seed", gen_seed, "Generator seed");
  add_generator_flags(gen, gen_flags);
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run one scenario under one strategy");
  std::string run_scenario, run_strategy = "none", run_events, run_state, run_csv;
  std::optional<std::int64_t> run_ceiling;
  StrategyFlags run_flags;
  run->add_option("scenario", run_scenario, "Scenario file")->required();
  run->add_option("-s,--strategy", run_strategy, "none, full, partial-local or partial-team")
      ->check(CLI::IsMember({"none", "full", "partial-local", "partial-team"}));
  add_strategy_flags(run, run_flags);
  run->add_option("--ceiling", run_ceiling, "Round ceiling per convergence phase (default 10 * n_t * D)");
  run->add_option("--events", run_events, "Write the per-round belief event log (JSON lines) here");
  run->add_option("--final-state", run_state, "Write the final world state here (for validate)");
  run->add_option("--csv", run_csv, "Write per-arrival rows here");

  // compare
  auto* cmp = app.add_subcommand("compare", "Monte Carlo sweep over seeds and strategies");
  GeneratorFlags cmp_flags;
  int cmp_seeds = 10;
  std::uint64_t cmp_first = 1;
  std::vector<std::string> cmp_strategies{"none", "partial-local", "partial-team", "full"};
  std::string cmp_runs = "-", cmp_summary, cmp_svg;
  std::optional<std::int64_t> cmp_ceiling;
  unsigned cmp_threads = 0;
  cmp->add_option("--seeds", cmp_seeds, "Number of seeds")->check(CLI::PositiveNumber);
  cmp->add_option("--first-seed", cmp_first, "First seed; seeds are consecutive");
  add_generator_flags(cmp, cmp_flags);
  cmp->add_option("--strategies", cmp_strategies, "Strategies to compare")
      ->check(CLI::IsMember({"none", "full", "partial-local", "partial-team"}));
  cmp->add_option("--runs-csv", cmp_runs, "Per-run rows (default stdout)");
  cmp->add_option("--summary-csv", cmp_summary, "Per-strategy aggregates");
  cmp->add_option("--svg", cmp_svg, "Box-plot figure");
  cmp->add_option("--ceiling", cmp_ceiling, "Round ceiling per convergence phase");
  cmp->add_option("--threads", cmp_threads, "Worker threads (0: all cores)");

  // validate
  auto* val = app.add_subcommand("validate", "Re-check a saved final world state");
  std::string val_state;
  val->add_option("state", val_state, "World state file written by run --final-state")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const Scenario s = generate_scenario(resolve(gen_flags, gen_seed));
      with_output(gen_out, [&](std::ostream& os) { os << scenario_to_string(s); });
      if (gen_out != "-") std::cerr << "wrote " << gen_out << " (" << hex(scenario_hash(s)) << ")\n";
      return kOk;
    }

    if (*run) {
      Scenario s = load_scenario(run_scenario);
      apply(run_flags, s);
      const ResetKind kind = reset_kind_from_string(run_strategy);
      ExperimentResult r;
      try {
        r = run_experiment(s, kind, ExperimentOptions{run_ceiling});
      } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!run_events.empty()) with_output(run_events, [&](std::ostream& os) { write_event_log(os, e.log()); });
        return kNoConvergence;
      }
      print_metrics(std::cout, s, kind, r.metrics);
      if (!run_events.empty()) with_output(run_events, [&](std::ostream& os) { write_event_log(os, r.events); });
      if (!run_state.empty()) save_world(r.final_world, run_state);
      if (!run_csv.empty()) {
        with_output(run_csv, [&](std::ostream& os) {
          write_runs_csv(os, {RunRecord{s.seed, kind, scenario_hash(s), r.metrics}});
        });
      }
      const ValidationReport v = validate_assignment(r.final_world);
      if (!v.ok()) {
        std::cerr << v.summary();
        return kInvalid;
      }
      return kOk;
    }

    if (*cmp) {
      MonteCarloConfig cfg;
      for (int k = 0; k < cmp_seeds; ++k) cfg.seeds.push_back(cmp_first + static_cast<std::uint64_t>(k));
      for (const auto& name : cmp_strategies) cfg.strategies.push_back(reset_kind_from_string(name));
      cfg.generator = resolve(cmp_flags, cmp_first);
      cfg.options.round_ceiling = cmp_ceiling;
      cfg.threads = cmp_threads;
      MonteCarloResult r;
      try {
        r = monte_carlo(cfg);
      } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoConvergence;
      }
      with_output(cmp_runs, [&](std::ostream& os) { write_runs_csv(os, r.runs); });
      if (!cmp_summary.empty()) with_output(cmp_summary, [&](std::ostream& os) { write_summary_csv(os, r.aggregates); });
      if (!cmp_svg.empty()) with_output(cmp_svg, [&](std::ostream& os) { write_boxplot_svg(os, r.aggregates); });
      std::ostringstream table;
      table << "strategy        mean-rounds  max-rounds  mean-cum-delta\n";
      for (const auto& a : r.aggregates) {
        table.width(16);
        table << std::left << to_string(a.strategy) << "  " << format_double(a.arrival_rounds.mean) << "  "
              << format_double(a.arrival_rounds.max) << "  " << format_double(a.cumulative_delta.mean) << "\n";
      }
      std::cerr << table.str();
      return kOk;
    }

    if (*val) {
      const WorldState w = load_world(val_state);
      const ValidationReport v = validate_assignment(w);
      std::cout << v.summary();
      return v.ok() ? kOk : kInvalid;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
