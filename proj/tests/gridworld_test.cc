// Copyright 2026 The semeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semeq/gridworld.h"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

namespace semeq {
namespace {

Observation Obs(int ac, int ar, int tc, int tr) {
  return Observation{Cell{ac, ar}, Cell{tc, tr}};
}

// Shortest path lengths from `from` by breadth-first search over the
// four-neighbour moves. Independent of GridWorld::Step on purpose.
std::vector<int> BfsDistances(int width, int height, Cell from) {
  std::vector<int> dist(width * height, -1);
  std::deque<Cell> frontier = {from};
  dist[from.row * width + from.col] = 0;
  const int dc[] = {1, 0, -1, 0};
  const int dr[] = {0, 1, 0, -1};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.col + dc[k], c.row + dr[k]};
      if (n.col < 0 || n.col >= width || n.row < 0 || n.row >= height) {
        continue;
      }
      int& d = dist[n.row * width + n.col];
      if (d >= 0) continue;
      d = dist[c.row * width + c.col] + 1;
      frontier.push_back(n);
    }
  }
  return dist;
}

TEST(GridWorldTest, StepMovesAndClamps) {
  const GridWorld world(GridConfig{});
  EXPECT_EQ(world.Step(Obs(0, 0, 2, 0), Action::kRight), Obs(1, 0, 2, 0));
  EXPECT_EQ(world.Step(Obs(0, 0, 2, 0), Action::kLeft), Obs(0, 0, 2, 0));
  EXPECT_EQ(world.Step(Obs(0, 0, 2, 0), Action::kUp), Obs(0, 0, 2, 0));
  EXPECT_EQ(world.Step(Obs(4, 4, 2, 0), Action::kDown), Obs(4, 4, 2, 0));
  const Observation done = world.Step(Obs(1, 0, 1, 1), Action::kDown);
  EXPECT_EQ(done, Obs(1, 1, 1, 1));
  EXPECT_TRUE(done.IsTerminal());
}

TEST(GridWorldTest, RejectsTerminalAndOutOfBounds) {
  const GridWorld world(GridConfig{});
  EXPECT_THROW(world.Step(Obs(2, 2, 2, 2), Action::kUp), std::invalid_argument);
  EXPECT_THROW(world.QStar(Obs(2, 2, 2, 2), Action::kUp),
               std::invalid_argument);
  EXPECT_THROW(world.BestAction(Obs(5, 0, 0, 0)), std::invalid_argument);
}

TEST(GridWorldTest, QValuesOfReferenceObservation) {
  const GridWorld world(GridConfig{});
  const Observation o = Obs(0, 0, 2, 0);
  EXPECT_EQ(world.QStar(o, Action::kRight), -2);
  EXPECT_EQ(world.QStar(o, Action::kDown), -4);
  EXPECT_EQ(world.QStar(o, Action::kLeft), -3);
  EXPECT_EQ(world.QStar(o, Action::kUp), -3);
  EXPECT_EQ(world.QStarPlus(o, Action::kRight), 2);
  EXPECT_EQ(world.QStarPlus(o, Action::kDown), 0);
  EXPECT_EQ(world.QStarPlus(o, Action::kUp), 1);
}

TEST(GridWorldTest, BestActionAndTieBreak) {
  const GridWorld world(GridConfig{});
  EXPECT_EQ(world.BestAction(Obs(0, 0, 2, 0)), Action::kRight);
  EXPECT_EQ(world.BestAction(Obs(2, 2, 2, 0)), Action::kUp);
  EXPECT_EQ(world.BestAction(Obs(1, 1, 2, 2)), Action::kRight);
  EXPECT_EQ(world.BestAction(Obs(3, 3, 2, 2)), Action::kLeft);
}

TEST(GridWorldTest, QPlusIsNonNegativeWithAZero) {
  const GridWorld world(GridConfig{});
  for (const Observation& o : NonTerminalObservations(world.config())) {
    const PerAction<double> qp = world.QPlusValues(o);
    double lo = qp[0];
    for (double v : qp) {
      EXPECT_GE(v, 0.0);
      lo = std::min(lo, v);
    }
    EXPECT_EQ(lo, 0.0);
  }
}

TEST(GridWorldTest, UniformMu) {
  GridConfig two{2, 2, 4};
  const ObservationDistribution mu2 = UniformMu(two);
  ASSERT_EQ(mu2.support.size(), 12u);
  for (double w : mu2.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 12.0);

  const ObservationDistribution mu5 = UniformMu(GridConfig{});
  ASSERT_EQ(mu5.support.size(), 600u);
  EXPECT_NEAR(std::accumulate(mu5.weights.begin(), mu5.weights.end(), 0.0), 1.0,
              1e-12);
  for (const Observation& o : mu5.support) EXPECT_FALSE(o.IsTerminal());
}

TEST(GridWorldTest, BfsMatchesManhattanUpTo8x8) {
  for (int w = 2; w <= 8; ++w) {
    for (int h = 2; h <= 8; ++h) {
      const GridWorld world(GridConfig{w, h, w + h});
      for (int s = 0; s < w * h; ++s) {
        const Cell from{s % w, s / w};
        const std::vector<int> dist = BfsDistances(w, h, from);
        for (int t = 0; t < w * h; ++t) {
          ASSERT_EQ(dist[t], world.Distance(from, Cell{t % w, t / w}))
              << w << "x" << h;
        }
      }
    }
  }
}

TEST(GridWorldTest, QStarAgreesWithBfs) {
  const GridConfig cfg{6, 4, 10};
  const GridWorld world(cfg);
  for (const Observation& o : NonTerminalObservations(cfg)) {
    const std::vector<int> dist =
        BfsDistances(cfg.width, cfg.height, o.treasure);
    for (Action a : kAllActions) {
      const Cell next = world.Step(o, a).agent;
      EXPECT_EQ(world.QStar(o, a),
                -(1 + dist[next.row * cfg.width + next.col]));
    }
  }
}

TEST(GridWorldTest, BellmanConsistency) {
  const GridWorld world(GridConfig{});
  for (const Observation& o : NonTerminalObservations(world.config())) {
    for (Action a : kAllActions) {
      const Observation next = world.Step(o, a);
      double expected = -1.0;
      if (!next.IsTerminal()) {
        const PerAction<double> q = world.QValues(next);
        expected += *std::max_element(q.begin(), q.end());
      }
      ASSERT_EQ(world.QStar(o, a), expected) << ToString(o);
    }
  }
}

TEST(GridWorldTest, GreedyPolicyIsShortest) {
  for (const GridConfig& cfg : {GridConfig{}, GridConfig{7, 3, 10}}) {
    const GridWorld world(cfg);
    for (const Observation& start : NonTerminalObservations(cfg)) {
      Observation o = start;
      int steps = 0;
      while (!o.IsTerminal() && steps <= cfg.NumCells()) {
        o = world.Step(o, world.BestAction(o));
        ++steps;
      }
      ASSERT_EQ(steps, world.Distance(start.agent, start.treasure));
    }
  }
}

TEST(GridWorldTest, SlotsRoundTrip) {
  const GridConfig cfg{4, 3, 7};
  for (std::size_t s = 0; s < cfg.NumObservationSlots(); ++s) {
    EXPECT_EQ(cfg.SlotOf(cfg.ObservationAtSlot(s)), s);
  }
}

TEST(GridWorldTest, ParseGridSize) {
  const GridConfig g = ParseGridSize("7x4");
  EXPECT_EQ(g.width, 7);
  EXPECT_EQ(g.height, 4);
  EXPECT_THROW(ParseGridSize("7"), std::invalid_argument);
  EXPECT_THROW(ParseGridSize("1x5"), std::invalid_argument);
  EXPECT_THROW(ParseGridSize("ax5"), std::invalid_argument);
  EXPECT_THROW(ParseGridSize("5x5", 3), std::invalid_argument);
}

}  // namespace
}  // namespace semeq
