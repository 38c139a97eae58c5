#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mtirl {

inline constexpr int kGridSize = 10;
inline constexpr int kNumStates = kGridSize * kGridSize;
inline constexpr int kNumActions = 4;
inline constexpr int kNumGoals = 5;

struct GridPos {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(GridPos, GridPos) = default;
};

constexpr bool in_bounds(GridPos p) {
  return p.row >= 0 && p.row < kGridSize && p.col >= 0 && p.col < kGridSize;
}

// Row-major state index, row * 10 + col.
constexpr int state_index(GridPos p) { return p.row * kGridSize + p.col; }

constexpr GridPos state_pos(int index) { return {index / kGridSize, index % kGridSize}; }

enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::array<Action, kNumActions> kAllActions = {Action::Up, Action::Down, Action::Left,
                                                                Action::Right};

constexpr int action_index(Action a) { return static_cast<int>(a); }

std::string_view action_name(Action a);

// Reward triple of one environment or teacher. `timeout` is added to the step
// penalty on the transition that exhausts the step budget.
struct RewardProfile {
  double goal = 10.0;
  double step = -0.1;
  double timeout = -10.0;

  friend bool operator==(const RewardProfile&, const RewardProfile&) = default;
};

// Throws std::invalid_argument unless goal > 0, step <= 0, timeout <= 0.
void validate(const RewardProfile& profile);

// Goal +10, step -0.1, timeout -10.
RewardProfile balanced_profile();

struct DriftSchedule {
  int tau = 10;
  std::array<GridPos, kNumGoals> goals{};
};

// Goals in specialist order: (0,0), (0,9), (9,0), (9,9), (5,5).
DriftSchedule default_drift_schedule(int tau = 10);

// Throws std::invalid_argument unless tau >= 1 and the goals are distinct and in bounds.
void validate(const DriftSchedule& schedule);

enum class Terminal : std::uint8_t { None, Goal, Timeout };

struct StepOutcome {
  GridPos next_state;
  double reward = 0.0;
  Terminal terminal = Terminal::None;
};

// Deterministic move; moves into a wall leave the agent in place.
GridPos apply_action(GridPos state, Action action);

// One environment transition. `steps_taken` counts steps before this one.
StepOutcome step(GridPos state, Action action, GridPos goal, int steps_taken, const RewardProfile& profile,
                 int max_steps);

GridPos goal_at(int episode, const DriftSchedule& schedule);

// Episode 0 is the initial placement, not a drift.
bool is_drift_episode(int episode, int tau);

int manhattan(GridPos a, GridPos b);

}  // namespace mtirl
