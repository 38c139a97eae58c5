#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mtirl/experiment.hpp"

using namespace mtirl;

namespace {

std::vector<EpisodeRecord> trace_from(const std::vector<double>& rewards) {
  std::vector<EpisodeRecord> out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    EpisodeRecord r;
    r.episode = static_cast<int>(i);
    r.total_reward = rewards[i];
    out.push_back(r);
  }
  return out;
}

ExperimentConfig small(Mode mode) {
  ExperimentConfig c = default_config(mode);
  c.runs = 4;
  c.episodes = 100;
  c.teacher_episodes = 2000;
  c.threads = 1;
  c.rho_grid = {0.2, 1.0};
  c.omega_grid = {0.5, 1.0};
  c.sigma_grid = {0.0, 2.0};
  return c;
}

}  // namespace

TEST(Experiment, RecoveryIsFirstPositiveEpisode) {
  std::vector<double> r(20, 5.0);
  r[10] = -5.0;
  r[11] = -2.0;
  r[12] = 3.0;
  const auto events = adaptation_speed(trace_from(r), 10);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].episode, 10);
  EXPECT_EQ(events[0].recovery, 3);
  EXPECT_FALSE(events[0].censored);
}

TEST(Experiment, AllPositiveRecoversImmediately) {
  const auto events = adaptation_speed(trace_from(std::vector<double>(1000, 1.0)), 10);
  EXPECT_EQ(events.size(), 99u);
  for (const auto& e : events) EXPECT_EQ(e.recovery, 1);
}

TEST(Experiment, NoRecoveryIsCensoredAtTau) {
  std::vector<double> r(30, 1.0);
  for (int t = 10; t < 20; ++t) r[static_cast<std::size_t>(t)] = 0.0;
  const auto events = adaptation_speed(trace_from(r), 10);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].recovery, 10);
  EXPECT_TRUE(events[0].censored);
  EXPECT_EQ(events[1].recovery, 1);
}

TEST(Experiment, EntropyBounds) {
  const std::array<long long, 5> one{0, 7, 0, 0, 0};
  const std::array<long long, 5> flat{3, 3, 3, 3, 3};
  const std::array<long long, 5> two{5, 5, 0, 0, 0};
  EXPECT_DOUBLE_EQ(normalized_entropy(one), 0.0);
  EXPECT_NEAR(normalized_entropy(flat), 1.0, 1e-12);
  EXPECT_NEAR(normalized_entropy(two), std::log(2.0) / std::log(5.0), 1e-12);
}

TEST(Experiment, DiversityIsPerPhase) {
  // Each phase uses only its own specialist: zero, even though the pooled
  // distribution is uniform.
  std::vector<EpisodeRecord> trace(5);
  for (int k = 0; k < 5; ++k) {
    trace[static_cast<std::size_t>(k)].goal_index = k;
    trace[static_cast<std::size_t>(k)].selected_counts[static_cast<std::size_t>(k)] = 10;
  }
  EXPECT_DOUBLE_EQ(selection_diversity(trace), 0.0);
  trace[0].selected_counts[1] = 10;
  EXPECT_NEAR(selection_diversity(trace), std::log(2.0) / std::log(5.0) / 5.0, 1e-12);
}

TEST(Experiment, SeedDerivationIsPureAndDistinct) {
  EXPECT_EQ(derive_seed(42, 3, 7), derive_seed(42, 3, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t cell = 0; cell < 25; ++cell) {
    for (std::uint64_t run = 0; run < 50; ++run) seen.insert(derive_seed(42, cell, run));
  }
  seen.insert(derive_seed(42, kBaselineCell, 0));
  seen.insert(derive_seed(42, kTeacherStream, 0));
  EXPECT_EQ(seen.size(), 25u * 50u + 2u);
  EXPECT_NE(derive_seed(42, 0, 0), derive_seed(43, 0, 0));
}

TEST(Experiment, ConfigIds) {
  ExperimentConfig c = default_config(Mode::Drift);
  c.rho = 0.6;
  c.omega = 0.2;
  EXPECT_EQ(config_id_for(c), "drift_rho0.6_omega0.2");
  c.mode = Mode::Uncertainty;
  c.sigma = 1.5;
  EXPECT_EQ(config_id_for(c), "uncertainty_sigma1.5");
  EXPECT_EQ(config_id_for(default_config(Mode::Baseline)), "baseline");
}

TEST(Experiment, SweepRunCounts) {
  ExperimentConfig full = default_config(Mode::Drift);
  EXPECT_EQ(full.rho_grid.size() * full.omega_grid.size() * static_cast<std::size_t>(full.runs), 1250u);

  ExperimentConfig desk = small(Mode::Drift);
  apply_desk_profile(desk);
  desk.episodes = 20;
  desk.teacher_episodes = 100;
  const auto result = run_sweep(desk, false);
  std::size_t runs = 0;
  for (const auto& cell : result.cells) runs += cell.runs.size();
  EXPECT_EQ(result.cells.size(), 9u);
  EXPECT_EQ(runs, 90u);
}

TEST(Experiment, SweepIsDeterministicAndAppendsBaseline) {
  const auto a = run_sweep(small(Mode::Drift));
  const auto b = run_sweep(small(Mode::Drift));
  ASSERT_EQ(a.cells.size(), 5u);
  EXPECT_EQ(a.cells.back().config_id, "baseline");
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    for (std::size_t r = 0; r < a.cells[i].runs.size(); ++r) {
      EXPECT_EQ(a.cells[i].runs[r].records, b.cells[i].runs[r].records);
    }
  }
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  ExperimentConfig c = small(Mode::Drift);
  c.rho = 0.6;
  c.omega = 0.6;
  c.runs = 6;
  const auto roster = train_roster_for(c);
  const auto serial = run_single(c, roster);
  c.threads = 3;
  const auto parallel = run_single(c, roster);
  for (std::size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(serial.cells[0].runs[r].records, parallel.cells[0].runs[r].records);
  }
}

TEST(Experiment, AggregateIsOrderInvariant) {
  ExperimentConfig c = small(Mode::Drift);
  c.runs = 10;
  c.rho = 0.6;
  c.omega = 0.6;
  CellResult cell = run_single(c).cells[0];
  const CellAggregate before = aggregate(cell);
  std::reverse(cell.runs.begin(), cell.runs.end());
  std::rotate(cell.runs.begin(), cell.runs.begin() + 3, cell.runs.end());
  const CellAggregate after = aggregate(cell);
  EXPECT_NEAR(before.mean_reward, after.mean_reward, 1e-12);
  EXPECT_NEAR(before.std_reward, after.std_reward, 1e-12);
  EXPECT_NEAR(before.success_rate, after.success_rate, 1e-12);
  EXPECT_NEAR(before.mean_recovery, after.mean_recovery, 1e-12);
  EXPECT_EQ(before.selections, after.selections);
}

TEST(Experiment, BiasSelectionsAreConserved) {
  ExperimentConfig c = small(Mode::Bias);
  c.rho = 0.8;
  c.omega = 0.8;
  c.bias_teacher_episodes = 300;
  const auto result = run_single(c);
  const CellAggregate agg = aggregate(result.cells[0]);
  long long steps = 0;
  for (const auto& run : result.cells[0].runs) {
    for (const auto& e : run.records) steps += e.steps;
    double share = 0.0;
    for (double s : run.summary.selection_distribution) share += s;
    EXPECT_NEAR(share, 1.0, 1e-12);
  }
  long long selections = 0;
  for (long long s : agg.selections) selections += s;
  EXPECT_EQ(selections, steps);
  EXPECT_TRUE(std::isnan(result.cells[0].runs[0].summary.mean_adaptation_speed));
}

TEST(Experiment, BaselineSolvesStaticWorld) {
  ExperimentConfig c = default_config(Mode::Baseline);
  c.runs = 5;
  c.episodes = 1000;
  c.tau = c.episodes + 1;
  const auto result = run_baseline(c);
  for (const auto& run : result.cells[0].runs) {
    int late = 0;
    for (std::size_t t = 900; t < 1000; ++t) late += run.records[t].success;
    EXPECT_GT(late, 80);
  }
}

TEST(Experiment, UncertaintyCellsPerSigma) {
  const auto result = run_uncertainty(small(Mode::Uncertainty));
  ASSERT_EQ(result.cells.size(), 2u);
  EXPECT_EQ(result.cells[0].config_id, "uncertainty_sigma0");
  EXPECT_DOUBLE_EQ(aggregate(result.cells[0]).diversity, 0.0);
  EXPECT_GT(aggregate(result.cells[1]).diversity, 0.0);
}

TEST(Experiment, ParallelForPropagatesErrors) {
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](int i) { hit[static_cast<std::size_t>(i)] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
