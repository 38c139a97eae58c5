#include "mtirl/grid.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mtirl {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Up:
      return "up";
    case Action::Down:
      return "down";
    case Action::Left:
      return "left";
    case Action::Right:
      return "right";
  }
  return "?";
}

void validate(const RewardProfile& profile) {
  if (!(profile.goal > 0.0)) throw std::invalid_argument("reward profile: goal reward must be positive");
  if (!(profile.step <= 0.0)) throw std::invalid_argument("reward profile: step reward must be <= 0");
  if (!(profile.timeout <= 0.0)) throw std::invalid_argument("reward profile: timeout reward must be <= 0");
}

RewardProfile balanced_profile() { return {10.0, -0.1, -10.0}; }

DriftSchedule default_drift_schedule(int tau) {
  return {tau, {GridPos{0, 0}, GridPos{0, 9}, GridPos{9, 0}, GridPos{9, 9}, GridPos{5, 5}}};
}

void validate(const DriftSchedule& schedule) {
  if (schedule.tau < 1) throw std::invalid_argument("drift schedule: tau must be >= 1");
  for (std::size_t i = 0; i < schedule.goals.size(); ++i) {
    if (!in_bounds(schedule.goals[i])) throw std::invalid_argument("drift schedule: goal out of bounds");
    for (std::size_t j = 0; j < i; ++j) {
      if (schedule.goals[i] == schedule.goals[j]) throw std::invalid_argument("drift schedule: duplicate goal");
    }
  }
}

GridPos apply_action(GridPos state, Action action) {
  GridPos next = state;
  switch (action) {
    case Action::Up:
      --next.row;
      break;
    case Action::Down:
      ++next.row;
      break;
    case Action::Left:
      --next.col;
      break;
    case Action::Right:
      ++next.col;
      break;
  }
  return in_bounds(next) ? next : state;
}

StepOutcome step(GridPos state, Action action, GridPos goal, int steps_taken, const RewardProfile& profile,
                 int max_steps) {
  StepOutcome out;
  out.next_state = apply_action(state, action);
  if (out.next_state == goal) {
    out.reward = profile.goal;
    out.terminal = Terminal::Goal;
  } else if (steps_taken + 1 >= max_steps) {
    out.reward = profile.step + profile.timeout;
    out.terminal = Terminal::Timeout;
  } else {
    out.reward = profile.step;
  }
  return out;
}

GridPos goal_at(int episode, const DriftSchedule& schedule) {
  const int phase = (episode / schedule.tau) % kNumGoals;
  return schedule.goals[static_cast<std::size_t>(phase)];
}

bool is_drift_episode(int episode, int tau) { return episode > 0 && episode % tau == 0; }

int manhattan(GridPos a, GridPos b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

}  // namespace mtirl
