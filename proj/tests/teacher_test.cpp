#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "mtirl/teacher.hpp"
#include "oracles.hpp"

using namespace mtirl;

namespace {

int greedy_rollout_length(const Teacher& t, GridPos s) {
  for (int n = 1; n <= 100; ++n) {
    s = apply_action(s, greedy_action(t.q, s));
    if (s == t.spec.goal) return n;
  }
  return -1;
}

const std::vector<Teacher>& drift_roster() {
  static const std::vector<Teacher> roster = train_roster(drift_roster_specs(), LearnParams{}, 100, 42, 1.0, 1.0);
  return roster;
}

Teacher fixed_teacher(double rho, double omega) {
  Teacher t;
  t.spec.goal = {9, 9};
  t.q.at({4, 4}, Action::Right) = 5.0;
  t.q.at({4, 4}, Action::Up) = -3.0;
  t.rho = rho;
  t.omega = omega;
  return t;
}

}  // namespace

TEST(Teacher, OracleDistancesMatchManhattanOffGoal) {
  const auto d = oracle::steps_to_goal({5, 5});
  EXPECT_EQ(d[static_cast<std::size_t>(state_index({0, 0}))], 10);
  EXPECT_EQ(d[static_cast<std::size_t>(state_index({5, 5}))], 2);
  EXPECT_EQ(oracle::steps_to_goal({0, 0})[0], 1);
}

TEST(Teacher, SpecialistsFollowShortestPathsFromEveryState) {
  for (const Teacher& t : drift_roster()) {
    const auto d = oracle::steps_to_goal(t.spec.goal);
    for (int i = 0; i < kNumStates; ++i) {
      EXPECT_EQ(greedy_rollout_length(t, state_pos(i)), d[static_cast<std::size_t>(i)])
          << "teacher " << t.spec.id << " state " << i;
    }
  }
}

TEST(Teacher, WorstActionNeverApproachesGoal) {
  for (const Teacher& t : drift_roster()) {
    for (int i = 0; i < kNumStates; ++i) {
      const GridPos s = state_pos(i);
      if (s == t.spec.goal) continue;
      const GridPos n = apply_action(s, worst_action(t.q, s));
      EXPECT_GE(manhattan(n, t.spec.goal), manhattan(s, t.spec.goal));
    }
  }
}

TEST(Teacher, TrainingIsDeterministic) {
  const auto specs = drift_roster_specs(500);
  const auto a = train_roster(specs, {}, 100, 7, 1.0, 1.0);
  const auto b = train_roster(specs, {}, 100, 7, 1.0, 1.0);
  const auto c = train_roster(specs, {}, 100, 8, 1.0, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_NE(a[i].q, c[i].q);
  }
}

TEST(Teacher, RosterSpecs) {
  const auto drift = drift_roster_specs();
  ASSERT_EQ(drift.size(), 5u);
  EXPECT_EQ(drift[4].goal, (GridPos{5, 5}));
  for (const auto& s : drift) EXPECT_FALSE(s.train_start.has_value());

  const auto bias = bias_roster_specs();
  ASSERT_EQ(bias.size(), 5u);
  EXPECT_DOUBLE_EQ(bias[0].profile.goal, 100.0);
  EXPECT_DOUBLE_EQ(bias[1].profile.step, -0.01);
  EXPECT_DOUBLE_EQ(bias[3].profile.step, -1.0);
  EXPECT_DOUBLE_EQ(bias[4].profile.goal, 5.0);
  EXPECT_DOUBLE_EQ(bias[4].train_epsilon0, 0.30);
  for (const auto& s : bias) {
    EXPECT_EQ(s.goal, (GridPos{9, 9}));
    EXPECT_EQ(s.train_episodes, 1000);
  }
}

TEST(Teacher, AdviceExtremes) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto none = advise(fixed_teacher(0.0, 1.0), {4, 4}, rng);
    EXPECT_FALSE(none.was_consulted);
    EXPECT_FALSE(none.action.has_value());

    const auto best = advise(fixed_teacher(1.0, 1.0), {4, 4}, rng);
    EXPECT_TRUE(best.was_consulted && best.was_accurate);
    EXPECT_EQ(best.action, Action::Right);

    const auto worst = advise(fixed_teacher(1.0, 0.0), {4, 4}, rng);
    EXPECT_TRUE(worst.was_consulted);
    EXPECT_FALSE(worst.was_accurate);
    EXPECT_EQ(worst.action, Action::Up);
  }
}

TEST(Teacher, AdviceDrawOrder) {
  // One draw when unavailable, two when consulted, availability first.
  Rng rng(99), mirror(99);
  Teacher t = fixed_teacher(0.5, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double u1 = mirror.uniform();
    const auto out = advise(t, {4, 4}, rng);
    ASSERT_EQ(out.was_consulted, u1 < 0.5);
    if (out.was_consulted) {
      const double u2 = mirror.uniform();
      ASSERT_EQ(out.was_accurate, u2 < 0.5);
    }
  }
}

TEST(Teacher, AdviceFrequenciesWithinThreeSigma) {
  Rng rng(123);
  const int n = 100000;
  for (double rho : {0.2, 0.6, 1.0}) {
    for (double omega : {0.2, 0.6, 1.0}) {
      const Teacher t = fixed_teacher(rho, omega);
      int consulted = 0, accurate = 0;
      for (int i = 0; i < n; ++i) {
        const auto out = advise(t, {4, 4}, rng);
        consulted += out.was_consulted;
        accurate += out.was_consulted && out.was_accurate;
      }
      EXPECT_NEAR(consulted, n * rho, 3 * std::sqrt(n * rho * (1 - rho)) + 1e-9);
      EXPECT_NEAR(accurate, consulted * omega, 3 * std::sqrt(consulted * omega * (1 - omega)) + 1e-9);
    }
  }
}

TEST(Teacher, PerturbZeroSigmaIsIdentityWithoutDraws) {
  Rng a(3), b(3);
  EXPECT_EQ(perturb_goal({9, 9}, 0.0, a), (GridPos{9, 9}));
  EXPECT_EQ(a.engine()(), b.engine()());
}

TEST(Teacher, PerturbClampsAtCorner) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const GridPos p = perturb_goal({9, 9}, 3.0, rng);
    EXPECT_TRUE(in_bounds(p));
  }
}

TEST(Teacher, PerturbNoiseHasRequestedSpread) {
  // At the centre with sigma 1 clamping is rare; rounding adds variance 1/12.
  Rng rng(5);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dr = perturb_goal({5, 5}, 1.0, rng).row - 5;
    sum += dr;
    sum_sq += dr * dr;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(sd, std::sqrt(1.0 + 1.0 / 12.0), 0.05 * std::sqrt(1.0 + 1.0 / 12.0));
}

TEST(Teacher, RosterRoundTrip) {
  auto roster = train_roster(bias_roster_specs(200), {}, 100, 9, 0.8, 0.6);
  std::stringstream ss;
  write_roster(ss, roster);
  const auto back = read_roster(ss);
  ASSERT_EQ(back.size(), roster.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].spec, roster[i].spec);
    EXPECT_EQ(back[i].q, roster[i].q);
    EXPECT_EQ(back[i].rho, 0.8);
    EXPECT_EQ(back[i].omega, 0.6);
  }
}

TEST(Teacher, RejectsMalformedRoster) {
  std::stringstream bad("roster 1\nteacher id=0 goal=12,3\n");
  EXPECT_THROW(read_roster(bad), std::runtime_error);
  std::stringstream empty("");
  EXPECT_THROW(read_roster(empty), std::runtime_error);
}

TEST(Teacher, FindTeacher) {
  const auto& roster = drift_roster();
  EXPECT_EQ(find_teacher(roster, 3).spec.goal, (GridPos{9, 9}));
  EXPECT_THROW(find_teacher(roster, 7), std::out_of_range);
}
