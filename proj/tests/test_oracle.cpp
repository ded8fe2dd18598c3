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

#include <cmath>

#include "cbba/oracle.hpp"
#include "oracles.hpp"

namespace cbba {
namespace {

TEST(Sga, OneAgentOneTask) {
  const std::vector<AgentSpec> agents{{AgentId{0}, {0, 0}, 1.0, 1}};
  TaskTable tasks;
  tasks.add({TaskId{1}, {6, 8}});
  const SgaSolution s = sga_solve(agents, tasks);
  EXPECT_EQ(s.assignment.at(TaskId{1}), AgentId{0});
  ASSERT_EQ(s.sequence.size(), 1u);
  EXPECT_NEAR(s.sequence[0].bid, std::pow(0.95, 10), 1e-12);
  EXPECT_EQ(s.paths[0], (Path{TaskId{1}}));
}

TEST(Sga, EquidistantTieGoesToLowerAgentId) {
  const std::vector<AgentSpec> agents{{AgentId{0}, {-1, 0}, 1.0, 1}, {AgentId{1}, {1, 0}, 1.0, 1}};
  TaskTable tasks;
  tasks.add({TaskId{1}, {0, 0}});
  EXPECT_EQ(sga_solve(agents, tasks).assignment.at(TaskId{1}), AgentId{0});

  const std::vector<AgentSpec> swapped{{AgentId{0}, {1, 0}, 1.0, 1}, {AgentId{1}, {-1, 0}, 1.0, 1}};
  EXPECT_EQ(sga_solve(swapped, tasks).assignment.at(TaskId{1}), AgentId{0});
}

TEST(Sga, CollinearTwoAgentsThreeTasksMatchesEnumeration) {
  const std::vector<AgentSpec> agents{{AgentId{0}, {0, 0}, 1.0, 2}, {AgentId{1}, {12, 0}, 1.0, 2}};
  TaskTable tasks;
  tasks.add({TaskId{1}, {3, 0}});
  tasks.add({TaskId{2}, {7, 0}});
  tasks.add({TaskId{3}, {10, 0}});
  const oracle::Greedy g = oracle::greedy(agents, tasks);
  const SgaSolution s = sga_solve(agents, tasks, 2);
  ASSERT_EQ(s.sequence.size(), g.steps.size());
  for (std::size_t n = 0; n < g.steps.size(); ++n) {
    EXPECT_EQ(s.sequence[n].task, g.steps[n].task);
    EXPECT_EQ(s.sequence[n].agent, g.steps[n].agent);
    EXPECT_NEAR(s.sequence[n].bid, g.steps[n].bid, 1e-12);
  }
  EXPECT_EQ(s.paths, g.paths);
  EXPECT_EQ(s.assignment.size(), 3u);
}

TEST(Sga, CapacityLimitsAssignments) {
  const std::vector<AgentSpec> agents{{AgentId{0}, {0, 0}, 1.0, 5}};
  TaskTable tasks;
  for (int j = 0; j < 4; ++j) tasks.add({TaskId{j}, {static_cast<double>(j), 1}});
  EXPECT_EQ(sga_solve(agents, tasks, 2).assignment.size(), 2u);
  EXPECT_EQ(sga_solve(agents, tasks).assignment.size(), 4u);
  EXPECT_THROW(sga_solve(agents, tasks, 0), InputError);
}

TEST(Sga, BidSequenceIsNonIncreasing) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 3, 10, 3);
    const SgaSolution s = sga_solve(inst.agents, inst.tasks);
    for (std::size_t n = 1; n < s.sequence.size(); ++n) {
      EXPECT_LE(s.sequence[n].bid, s.sequence[n - 1].bid);
    }
  }
}

TEST(Sga, NoTasksNoAssignment) {
  const std::vector<AgentSpec> agents{{AgentId{0}, {0, 0}, 1.0, 1}};
  const SgaSolution s = sga_solve(agents, TaskTable{});
  EXPECT_TRUE(s.assignment.empty());
  EXPECT_EQ(s.paths.size(), 1u);
}

}  // namespace
}  // namespace cbba
