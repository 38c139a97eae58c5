#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "mtirl/config.hpp"
#include "mtirl/grid.hpp"
#include "mtirl/q_table.hpp"
#include "mtirl/rng.hpp"
#include "mtirl/selection.hpp"
#include "mtirl/teacher.hpp"

namespace mtirl {

inline constexpr int kMaxTeachers = kNumGoals;

struct EpisodeRecord {
  int episode = 0;
  int goal_index = 0;
  double total_reward = 0.0;
  int steps = 0;
  bool success = false;
  int consultations = 0;
  int advice_followed = 0;
  int accurate_advice = 0;
  std::array<int, kMaxTeachers> selected_counts{};

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

enum class Strategy {
  None,              // no teachers
  GoalSimilarity,    // nearest perceived goal
  CumulativeReward,  // highest credited score
};

// Everything fixed for the duration of one episode.
struct EpisodeEnv {
  GridPos goal;
  int goal_index = 0;
  GridPos start{0, 0};
  RewardProfile profile;
  int max_steps = 100;
  double sigma = 0.0;
  LearnParams learn;
};

// Advice, when present, overrides both exploration and the greedy choice.
// Returns the action and whether it came from advice.
std::pair<Action, bool> choose_action(const QTable& q, GridPos s, const AdviceOutcome& advice, double eps, Rng& rng);

// One student episode with per-step teacher selection, advice and learning.
// In CumulativeReward mode the followed teacher is credited with the step
// reward under its own profile.
EpisodeRecord run_episode(QTable& student_q, std::span<const Teacher> roster, Strategy strategy,
                          SelectionState& selection, const EpisodeEnv& env, int episode, Rng& rng);

// Whole student lifetime for one run. The Q-table persists across drift
// events and epsilon follows one per-episode decay schedule.
std::vector<EpisodeRecord> run_student(const ExperimentConfig& config, std::span<const Teacher> roster, Rng& rng);

Strategy strategy_for(Mode mode);

}  // namespace mtirl
