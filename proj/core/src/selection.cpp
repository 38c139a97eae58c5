#include "mtirl/selection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mtirl {

int select_by_goal_similarity(std::span<const Teacher> roster, GridPos perceived_goal) {
  if (roster.empty()) throw std::invalid_argument("select_by_goal_similarity: empty roster");
  int best_id = roster.front().spec.id;
  int best_dist = manhattan(roster.front().spec.goal, perceived_goal);
  for (const Teacher& t : roster.subspan(1)) {
    const int d = manhattan(t.spec.goal, perceived_goal);
    if (d < best_dist || (d == best_dist && t.spec.id < best_id)) {
      best_dist = d;
      best_id = t.spec.id;
    }
  }
  return best_id;
}

int select_by_cumulative_reward(const SelectionState& state, Rng& rng) {
  const auto& scores = state.cumulative_scores;
  if (scores.empty()) throw std::invalid_argument("select_by_cumulative_reward: no teachers");
  double best = scores[0];
  for (double s : scores) best = std::max(best, s);
  // Small rosters only; a fixed buffer avoids an allocation per step.
  std::array<int, 64> tied{};
  int n_tied = 0;
  for (std::size_t i = 0; i < scores.size() && n_tied < static_cast<int>(tied.size()); ++i) {
    if (scores[i] == best) tied[static_cast<std::size_t>(n_tied++)] = static_cast<int>(i);
  }
  if (n_tied == 1) return tied[0];
  return tied[static_cast<std::size_t>(rng.uniform_int(n_tied))];
}

void credit_reward(SelectionState& state, int teacher_id, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("credit_reward: reward must be finite");
  if (teacher_id < 0 || static_cast<std::size_t>(teacher_id) >= state.cumulative_scores.size()) {
    throw std::out_of_range("credit_reward: teacher id " + std::to_string(teacher_id) + " not in roster");
  }
  state.cumulative_scores[static_cast<std::size_t>(teacher_id)] += r;
}

}  // namespace mtirl
