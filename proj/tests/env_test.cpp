#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

#include "mtirl/grid.hpp"

using namespace mtirl;

namespace {

GridPos expected_move(GridPos s, Action a) {
  int dr = 0, dc = 0;
  switch (a) {
    case Action::Up: dr = -1; break;
    case Action::Down: dr = 1; break;
    case Action::Left: dc = -1; break;
    case Action::Right: dc = 1; break;
  }
  GridPos n{s.row + dr, s.col + dc};
  if (n.row < 0 || n.row >= 10 || n.col < 0 || n.col >= 10) return s;
  return n;
}

}  // namespace

TEST(Env, WallMovesAreNoOps) {
  EXPECT_EQ(apply_action({0, 0}, Action::Up), (GridPos{0, 0}));
  EXPECT_EQ(apply_action({0, 0}, Action::Left), (GridPos{0, 0}));
  EXPECT_EQ(apply_action({9, 9}, Action::Down), (GridPos{9, 9}));
  EXPECT_EQ(apply_action({9, 9}, Action::Right), (GridPos{9, 9}));
}

TEST(Env, UnitMove) {
  EXPECT_EQ(apply_action({5, 5}, Action::Right), (GridPos{5, 6}));
  EXPECT_EQ(apply_action({5, 5}, Action::Up), (GridPos{4, 5}));
}

TEST(Env, EveryTransitionStaysInBoundsAndMatchesOracle) {
  for (int i = 0; i < kNumStates; ++i) {
    for (Action a : kAllActions) {
      const GridPos n = apply_action(state_pos(i), a);
      EXPECT_TRUE(in_bounds(n));
      EXPECT_EQ(n, expected_move(state_pos(i), a));
      EXPECT_LE(manhattan(state_pos(i), n), 1);
    }
  }
}

TEST(Env, StepIntoGoal) {
  const auto out = step({9, 8}, Action::Right, {9, 9}, 10, balanced_profile(), 100);
  EXPECT_EQ(out.terminal, Terminal::Goal);
  EXPECT_DOUBLE_EQ(out.reward, 10.0);
}

TEST(Env, OrdinaryStep) {
  const auto out = step({5, 5}, Action::Up, {9, 9}, 49, balanced_profile(), 100);
  EXPECT_EQ(out.terminal, Terminal::None);
  EXPECT_DOUBLE_EQ(out.reward, -0.1);
}

TEST(Env, LastStepTimesOut) {
  const auto out = step({5, 5}, Action::Up, {9, 9}, 99, balanced_profile(), 100);
  EXPECT_EQ(out.terminal, Terminal::Timeout);
  EXPECT_DOUBLE_EQ(out.reward, -10.1);
}

TEST(Env, GoalOnLastStepIsGoal) {
  const auto out = step({9, 8}, Action::Right, {9, 9}, 99, balanced_profile(), 100);
  EXPECT_EQ(out.terminal, Terminal::Goal);
  EXPECT_DOUBLE_EQ(out.reward, 10.0);
}

TEST(Env, FullTimeoutEpisodeSumsToAboutMinusTwenty) {
  GridPos s{0, 0};
  double total = 0.0;
  int steps = 0;
  for (;; ++steps) {
    const auto out = step(s, Action::Up, {9, 9}, steps, balanced_profile(), 100);
    total += out.reward;
    s = out.next_state;
    if (out.terminal != Terminal::None) {
      EXPECT_EQ(out.terminal, Terminal::Timeout);
      break;
    }
  }
  EXPECT_EQ(steps + 1, 100);
  EXPECT_NEAR(total, 100 * -0.1 + -10.0, 1e-9);
}

TEST(Env, DriftScheduleCycles) {
  const DriftSchedule d = default_drift_schedule(10);
  EXPECT_EQ(goal_at(0, d), (GridPos{0, 0}));
  EXPECT_EQ(goal_at(9, d), (GridPos{0, 0}));
  EXPECT_EQ(goal_at(10, d), (GridPos{0, 9}));
  EXPECT_EQ(goal_at(20, d), (GridPos{9, 0}));
  EXPECT_EQ(goal_at(30, d), (GridPos{9, 9}));
  EXPECT_EQ(goal_at(40, d), (GridPos{5, 5}));
  EXPECT_EQ(goal_at(50, d), (GridPos{0, 0}));
}

TEST(Env, DriftIsPeriodic) {
  for (int tau : {1, 3, 10, 37}) {
    const DriftSchedule d = default_drift_schedule(tau);
    for (int t = 0; t < 500; ++t) {
      EXPECT_EQ(goal_at(t, d), goal_at(t + 5 * tau, d));
    }
  }
}

TEST(Env, DriftEvents) {
  EXPECT_FALSE(is_drift_episode(0, 10));
  EXPECT_FALSE(is_drift_episode(9, 10));
  EXPECT_TRUE(is_drift_episode(10, 10));
  EXPECT_TRUE(is_drift_episode(990, 10));
  int events = 0;
  for (int t = 0; t < 1000; ++t) events += is_drift_episode(t, 10);
  EXPECT_EQ(events, 99);
}

TEST(Env, Validation) {
  EXPECT_NO_THROW(validate(balanced_profile()));
  EXPECT_THROW(validate(RewardProfile{0.0, -0.1, -10.0}), std::invalid_argument);
  EXPECT_THROW(validate(RewardProfile{10.0, 0.1, -10.0}), std::invalid_argument);
  EXPECT_THROW(validate(RewardProfile{10.0, -0.1, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(validate(default_drift_schedule(10)));
  EXPECT_THROW(validate(default_drift_schedule(0)), std::invalid_argument);
  DriftSchedule dup = default_drift_schedule(10);
  dup.goals[4] = dup.goals[0];
  EXPECT_THROW(validate(dup), std::invalid_argument);
}

TEST(Env, DefaultGoalsDistinct) {
  const DriftSchedule d = default_drift_schedule();
  std::set<int> seen;
  for (GridPos g : d.goals) seen.insert(state_index(g));
  EXPECT_EQ(seen.size(), 5u);
}

TEST(Env, Manhattan) {
  EXPECT_EQ(manhattan({0, 0}, {9, 9}), 18);
  EXPECT_EQ(manhattan({5, 5}, {5, 5}), 0);
  EXPECT_EQ(manhattan({2, 7}, {4, 1}), 8);
}
