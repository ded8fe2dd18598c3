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

#include "cbba/core.hpp"
#include "oracles.hpp"

namespace cbba {
namespace {

const AgentSpec kOrigin{AgentId{0}, {0, 0}, 1.0, 4};

TaskTable line_tasks(std::initializer_list<double> xs) {
  TaskTable t;
  int id = 1;
  for (double x : xs) t.add(TaskSpec{TaskId{id++}, {x, 0}, 1.0, 0.95});
  return t;
}

TEST(PathScore, EmptyPathScoresZero) {
  EXPECT_EQ(path_score(kOrigin, {}, TaskTable{}), 0.0);
}

TEST(PathScore, TaskAtStartScoresFullReward) {
  const TaskTable t = line_tasks({0.0});
  EXPECT_DOUBLE_EQ(path_score(kOrigin, {TaskId{1}}, t), 1.0);
}

TEST(PathScore, CollinearPairMatchesHandComputation) {
  const TaskTable t = line_tasks({5.0, 10.0});
  const double expected = std::pow(0.95, 5) + std::pow(0.95, 10);
  EXPECT_NEAR(expected, 1.37252, 5e-6);
  EXPECT_NEAR(path_score(kOrigin, {TaskId{1}, TaskId{2}}, t), expected, 1e-12);
  EXPECT_NEAR(path_score(kOrigin, {TaskId{1}, TaskId{2}}, t), oracle::score(kOrigin, {TaskId{1}, TaskId{2}}, t),
              1e-12);
}

TEST(PathScore, SpeedScalesTravelTime) {
  const TaskTable t = line_tasks({10.0});
  AgentSpec fast = kOrigin;
  fast.speed = 2.0;
  EXPECT_NEAR(path_score(fast, {TaskId{1}}, t), std::pow(0.95, 5), 1e-12);
}

TEST(PathScore, UnknownTaskIsInputError) {
  EXPECT_THROW(path_score(kOrigin, {TaskId{7}}, line_tasks({1.0})), InputError);
}

TEST(MarginalInsertion, EmptyPathHasOneSlot) {
  const TaskTable t = line_tasks({5.0});
  const Insertion ins = marginal_insertion(kOrigin, {}, TaskId{1}, t);
  EXPECT_EQ(ins.index, 0u);
  EXPECT_NEAR(ins.gain, std::pow(0.95, 5), 1e-12);
  EXPECT_NEAR(ins.gain, 0.77378, 5e-6);
}

TEST(MarginalInsertion, FrontBeatsAppendOnTheWayOut) {
  // Task 1 at x=10 already planned; candidate 2 at x=5.
  TaskTable t;
  t.add({TaskId{1}, {10, 0}});
  t.add({TaskId{2}, {5, 0}});
  const auto gains = oracle::insertion_gains(kOrigin, {TaskId{1}}, TaskId{2}, t);
  ASSERT_EQ(gains.size(), 2u);
  EXPECT_NEAR(gains[0], std::pow(0.95, 5), 1e-12);
  EXPECT_NEAR(gains[1], std::pow(0.95, 15), 1e-12);
  EXPECT_NEAR(gains[1], 0.46329, 5e-6);

  const Insertion ins = marginal_insertion(kOrigin, {TaskId{1}}, TaskId{2}, t);
  EXPECT_EQ(ins.index, 0u);
  EXPECT_NEAR(ins.gain, 0.77378, 5e-6);
}

TEST(MarginalInsertion, EqualGainsPickLowerIndex) {
  // Candidate at the agent's own position with zero-length legs everywhere:
  // every slot yields the same gain.
  TaskTable t;
  t.add({TaskId{1}, {0, 0}});
  t.add({TaskId{2}, {0, 0}});
  const Insertion ins = marginal_insertion(kOrigin, {TaskId{1}}, TaskId{2}, t);
  EXPECT_EQ(ins.index, 0u);
  EXPECT_DOUBLE_EQ(ins.gain, 1.0);
}

TEST(MarginalInsertion, CandidateAlreadyInPathViolatesContract) {
  const TaskTable t = line_tasks({5.0});
  EXPECT_THROW(marginal_insertion(kOrigin, {TaskId{1}}, TaskId{1}, t), ContractViolation);
}

TEST(MarginalInsertion, FullPathViolatesContract) {
  const TaskTable t = line_tasks({5.0, 6.0});
  AgentSpec one = kOrigin;
  one.capacity = 1;
  EXPECT_THROW(marginal_insertion(one, {TaskId{1}}, TaskId{2}, t), ContractViolation);
}

TEST(InsertAt, Examples) {
  const TaskId t1{1}, t2{2}, t3{3};
  EXPECT_EQ(insert_at({}, t1, 0, 4), (Path{t1}));
  EXPECT_EQ(insert_at({t1, t2}, t3, 1, 4), (Path{t1, t3, t2}));
  EXPECT_EQ(insert_at({t1, t2}, t3, 2, 4), (Path{t1, t2, t3}));
}

TEST(InsertAt, DuplicateOverflowAndRangeViolateContract) {
  const TaskId t1{1}, t2{2}, t3{3};
  EXPECT_THROW(insert_at({t1}, t1, 0, 4), ContractViolation);
  EXPECT_THROW(insert_at({t1, t2}, t3, 0, 2), ContractViolation);
  EXPECT_THROW(insert_at({t1}, t2, 2, 4), ContractViolation);
}

TEST(RemoveTask, Examples) {
  const TaskId t1{1}, t2{2}, t3{3}, t9{9};
  EXPECT_EQ(remove_task({t1, t2, t3}, t2), (Path{t1, t3}));
  EXPECT_EQ(remove_task({t1}, t9), (Path{t1}));
  EXPECT_EQ(remove_task({}, t1), Path{});
}

TEST(TaskTable, RejectsDuplicatesAndBadParameters) {
  TaskTable t;
  t.add({TaskId{1}, {0, 0}});
  EXPECT_THROW(t.add({TaskId{1}, {1, 1}}), InputError);
  EXPECT_THROW(t.add({TaskId{2}, {0, 0}, 1.0, 0.0}), InputError);
  EXPECT_THROW(t.add({TaskId{3}, {0, 0}, 1.0, 1.5}), InputError);
  EXPECT_THROW(t.add({TaskId{4}, {0, 0}, -1.0, 0.9}), InputError);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_THROW(t.index_of(TaskId{9}), InputError);
}

TEST(BeliefState, ConsistencyTracksWinnerBidPairs) {
  BeliefState b(3, 2);
  EXPECT_TRUE(b.consistent());
  b.winners[1] = AgentId{0};
  EXPECT_FALSE(b.consistent());
  b.bids[1] = 0.5;
  EXPECT_TRUE(b.consistent());
  b.clear(1);
  EXPECT_TRUE(b.consistent());
  EXPECT_EQ(b.winners[1], kNoAgent);
}

}  // namespace
}  // namespace cbba
