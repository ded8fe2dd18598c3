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

#include <algorithm>
#include <cmath>

#include "cbba/bundle.hpp"
#include "oracles.hpp"

namespace cbba {
namespace {

AgentState fresh(AgentSpec spec, const TaskTable& tasks, std::size_t n_agents = 1) {
  return AgentState(spec, tasks.size(), n_agents);
}

TEST(EligibleBid, StrictlyHigherBidWins) {
  EXPECT_TRUE(eligible_bid(0.9, 0.5, AgentId{1}, AgentId{2}));
  EXPECT_FALSE(eligible_bid(0.5, 0.9, AgentId{1}, AgentId{2}));
}

TEST(EligibleBid, TieGoesToLowerAgentId) {
  EXPECT_TRUE(eligible_bid(0.7, 0.7, AgentId{2}, AgentId{5}));
  EXPECT_FALSE(eligible_bid(0.7, 0.7, AgentId{5}, AgentId{2}));
}

TEST(EligibleBid, AnyPositiveBidBeatsNobody) {
  EXPECT_TRUE(eligible_bid(1e-9, kNegInf, AgentId{3}, kNoAgent));
}

TEST(BundleBuild, SingleUncontestedTask) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {3, 4}});
  const AgentSpec spec{AgentId{0}, {0, 0}, 1.0, 3};
  const AgentState s = bundle_build(fresh(spec, tasks), tasks);
  EXPECT_EQ(s.bundle, (Bundle{TaskId{1}}));
  EXPECT_EQ(s.path, (Path{TaskId{1}}));
  EXPECT_EQ(s.belief.winners[0], AgentId{0});
  EXPECT_NEAR(s.belief.bids[0], std::pow(0.95, 5), 1e-12);
}

TEST(BundleBuild, FullBundleIsLeftAlone) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {1, 0}});
  tasks.add({TaskId{2}, {2, 0}});
  const AgentSpec spec{AgentId{0}, {0, 0}, 1.0, 1};
  AgentState s = bundle_build(fresh(spec, tasks), tasks);
  ASSERT_EQ(s.bundle.size(), 1u);
  EXPECT_EQ(bundle_build(s, tasks), s);
}

TEST(BundleBuild, EmptyTableLeavesStateUnchanged) {
  const TaskTable tasks;
  const AgentState s = fresh({AgentId{0}, {0, 0}, 1.0, 2}, tasks);
  EXPECT_EQ(bundle_build(s, tasks), s);
}

// Every bundle-construction order is enumerated; with clamping, each order
// yields a bid sequence. Greedy must pick, at every step, a task whose
// clamped bid is maximal among the remaining choices.
TEST(BundleBuild, CollinearPairMatchesExhaustiveOrdering) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {5, 0}});
  tasks.add({TaskId{2}, {10, 0}});
  const AgentSpec spec{AgentId{0}, {0, 0}, 1.0, 2};

  struct Order {
    std::vector<TaskId> seq;
    std::vector<Score> bids;
  };
  std::vector<Order> orders;
  std::vector<TaskId> ids{TaskId{1}, TaskId{2}};
  do {
    Order o{ids, {}};
    Path p;
    Score floor = INFINITY;
    for (TaskId t : ids) {
      const auto g = oracle::insertion_gains(spec, p, t, tasks);
      const auto best = std::max_element(g.begin(), g.end()) - g.begin();
      o.bids.push_back(std::min(g[static_cast<std::size_t>(best)], floor));
      floor = o.bids.back();
      p = oracle::inserted(p, t, static_cast<std::size_t>(best));
    }
    orders.push_back(o);
  } while (std::next_permutation(ids.begin(), ids.end()));
  const auto greedy = std::max_element(orders.begin(), orders.end(),
                                       [](const Order& a, const Order& b) { return a.bids < b.bids; });

  const AgentState s = bundle_build(fresh(spec, tasks), tasks);
  EXPECT_EQ(s.bundle, greedy->seq);
  EXPECT_EQ(s.bundle, (Bundle{TaskId{1}, TaskId{2}}));
  EXPECT_EQ(s.path, (Path{TaskId{1}, TaskId{2}}));
  EXPECT_NEAR(s.belief.bids[0], std::pow(0.95, 5), 1e-12);
  EXPECT_NEAR(s.belief.bids[1], std::pow(0.95, 10), 1e-12);
}

TEST(BundleBuild, NewBidIsClampedToLowestHeldBid) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {0, 40}});
  tasks.add({TaskId{2}, {1, 0}});
  AgentState s = fresh({AgentId{0}, {0, 0}, 1.0, 2}, tasks);
  s.bundle = {TaskId{1}};
  s.path = {TaskId{1}};
  s.belief.winners[0] = AgentId{0};
  s.belief.bids[0] = 0.1;
  s = bundle_build(s, tasks);
  ASSERT_EQ(s.bundle, (Bundle{TaskId{1}, TaskId{2}}));
  EXPECT_GT(marginal_insertion(s.spec, {TaskId{1}}, TaskId{2}, tasks).gain, 0.1);
  EXPECT_EQ(s.belief.bids[1], 0.1);
}

TEST(BundleBuild, OutbidTaskIsSkipped) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {1, 0}});
  tasks.add({TaskId{2}, {50, 0}});
  AgentState s = fresh({AgentId{1}, {0, 0}, 1.0, 1}, tasks, 2);
  s.belief.winners[0] = AgentId{0};
  s.belief.bids[0] = 0.999;
  s = bundle_build(s, tasks);
  EXPECT_EQ(s.bundle, (Bundle{TaskId{2}}));
  EXPECT_EQ(s.belief.winners[0], AgentId{0});
}

TEST(BundleBuild, ZeroRewardTasksAreNeverBid) {
  TaskTable tasks;
  tasks.add({TaskId{1}, {1, 0}, 0.0, 0.95});
  const AgentState s = bundle_build(fresh({AgentId{0}, {0, 0}, 1.0, 2}, tasks), tasks);
  EXPECT_TRUE(s.bundle.empty());
}

TEST(BundleBuild, EqualBidsPickLowerTaskId) {
  TaskTable tasks;
  tasks.add({TaskId{7}, {0, 3}});
  tasks.add({TaskId{4}, {3, 0}});
  const AgentState s = bundle_build(fresh({AgentId{0}, {0, 0}, 1.0, 1}, tasks), tasks);
  EXPECT_EQ(s.bundle, (Bundle{TaskId{4}}));
}

}  // namespace
}  // namespace cbba
