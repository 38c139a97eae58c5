#pragma once

#include <span>
#include <vector>

#include "mtirl/grid.hpp"
#include "mtirl/rng.hpp"
#include "mtirl/teacher.hpp"

namespace mtirl {

// Running per-teacher score used by performance-based selection.
struct SelectionState {
  std::vector<double> cumulative_scores;

  explicit SelectionState(std::size_t roster_size = kNumGoals) : cumulative_scores(roster_size, 0.0) {}
};

// Teacher whose goal is nearest (Manhattan) to the perceived goal; ties go to
// the lowest id. Throws std::invalid_argument on an empty roster.
int select_by_goal_similarity(std::span<const Teacher> roster, GridPos perceived_goal);

// Index with the highest cumulative score; ties are broken uniformly at random.
// Draws from rng only when there is a tie.
int select_by_cumulative_reward(const SelectionState& state, Rng& rng);

// Adds r to one teacher's score. Throws on a bad id or a non-finite reward.
void credit_reward(SelectionState& state, int teacher_id, double r);

}  // namespace mtirl
