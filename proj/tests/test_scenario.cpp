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

#include <gtest/gtest.h>

#include <filesystem>

#include "cbba/harness.hpp"
#include "cbba/scenario.hpp"

namespace cbba {
namespace {

const std::string kSample = std::string(CBBA_SAMPLES_DIR) + "/two_agents_three_tasks.json";

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cbba_test_" + name)).string();
}

TEST(Generate, BaselinePresetShape) {
  const Scenario s = generate_scenario(baseline_preset(3));
  EXPECT_EQ(s.agents.size(), 8u);
  EXPECT_EQ(s.tasks.size(), 80u);
  EXPECT_EQ(s.arrivals.size(), 8u);
  EXPECT_EQ(s.capacity, 12);
  EXPECT_EQ(s.params.n_reset, 24);
  EXPECT_EQ(s.params.n_i_reset, 3);
  for (const auto& t : s.tasks) {
    EXPECT_EQ(t.discount, 0.95);
    EXPECT_EQ(t.reward, 1.0);
    EXPECT_GE(t.position.x, 0.0);
    EXPECT_LT(t.position.x, 100.0);
  }
  EXPECT_EQ(generate_scenario(constrained_preset(3)).capacity, 10);
}

TEST(Generate, NoArrivalsIsStatic) {
  GeneratorConfig g;
  g.n_arrivals = 0;
  EXPECT_TRUE(generate_scenario(g).arrivals.empty());
}

TEST(Generate, SameSeedIsByteIdentical) {
  GeneratorConfig g;
  g.seed = 42;
  EXPECT_EQ(scenario_to_string(generate_scenario(g)), scenario_to_string(generate_scenario(g)));
  GeneratorConfig h = g;
  h.seed = 43;
  EXPECT_NE(scenario_hash(generate_scenario(g)), scenario_hash(generate_scenario(h)));
}

TEST(Generate, CapacityFormula) {
  EXPECT_EQ(default_capacity(8, 80, 8), 12);
  EXPECT_EQ(default_capacity(3, 9, 0), 4);
  EXPECT_EQ(default_capacity(3, 10, 0), 5);
}

TEST(ScenarioFile, RoundTripIsIdentity) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    GeneratorConfig g;
    g.seed = seed;
    g.topology = TopologyKind::kRandomGeometric;
    Scenario s = generate_scenario(g);
    s.arrivals[2].params = StrategyParams{5, 1, 12.5, 0.5, 3};
    const std::string path = temp_path("roundtrip.json");
    save_scenario(s, path);
    EXPECT_EQ(load_scenario(path), s);
    std::filesystem::remove(path);
  }
}

TEST(ScenarioFile, MissingFieldIsNamed) {
  std::string text = scenario_to_string(generate_scenario(GeneratorConfig{}));
  const auto at = text.find("\"speed\"");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 7, "\"sped\"");
  try {
    scenario_from_string(text, "broken.json");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("agents[0]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("'speed'"), std::string::npos) << e.what();
  }
}

TEST(ScenarioFile, MissingVersionIsParseError) {
  EXPECT_THROW(scenario_from_string(R"({"seed": 1})"), ParseError);
  EXPECT_THROW(scenario_from_string(R"({"version": 9})"), ParseError);
}

TEST(ScenarioFile, MalformedTextReportsPosition) {
  try {
    scenario_from_string("{\n  \"version\": 1,\n  oops\n}", "bad.json");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ScenarioFile, DuplicateTaskIdIsParseError) {
  Scenario s = generate_scenario(GeneratorConfig{});
  s.arrivals[0].task.id = s.tasks[0].id;
  EXPECT_THROW(scenario_from_string(scenario_to_string(s)), ParseError);
}

TEST(ScenarioFile, HandWrittenSampleLoadsAndRuns) {
  const Scenario s = load_scenario(kSample);
  EXPECT_EQ(s.agents.size(), 2u);
  EXPECT_EQ(s.tasks.size(), 3u);
  EXPECT_EQ(s.topology.kind, TopologyKind::kLine);
  for (ResetKind k : kAllResetKinds) {
    const ExperimentResult r = run_experiment(s, k);
    EXPECT_TRUE(validate_assignment(r.final_world).ok()) << to_string(k);
    EXPECT_EQ(r.metrics.arrival_rounds.size(), 1u);
  }
}

TEST(WorldFile, RoundTripPreservesAllocation) {
  const ExperimentResult r = run_experiment(load_scenario(kSample), ResetKind::kNone);
  const WorldState back = world_from_string(world_to_string(r.final_world));
  EXPECT_TRUE(same_allocation(back, r.final_world));
  EXPECT_EQ(back.graph, r.final_world.graph);
  EXPECT_EQ(back.tasks, r.final_world.tasks);
  for (std::size_t i = 0; i < back.agents.size(); ++i) {
    EXPECT_EQ(back.agents[i], r.final_world.agents[i]);
  }
}

TEST(WorldFile, MissingBeliefsIsParseError) {
  EXPECT_THROW(world_from_string(R"({"version": 1, "round": 0, "tasks": [], "edges": [],
                                     "agents": [{"id": 0, "x": 0, "y": 0, "speed": 1, "capacity": 1}]})"),
               ParseError);
}

}  // namespace
}  // namespace cbba
