#pragma once

#include <array>
#include <iosfwd>
#include <span>

#include "mtirl/grid.hpp"
#include "mtirl/rng.hpp"

namespace mtirl {

struct LearnParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double eps0 = 0.2;
  double eps_final = 0.01;
  double eps_decay = 0.995;

  friend bool operator==(const LearnParams&, const LearnParams&) = default;
};

// Throws std::invalid_argument naming the offending field.
void validate(const LearnParams& params);

// Dense 100 x 4 action-value table, zero-initialised.
class QTable {
 public:
  static constexpr int kSize = kNumStates * kNumActions;

  double& at(GridPos s, Action a) { return values_[offset(s, a)]; }
  double at(GridPos s, Action a) const { return values_[offset(s, a)]; }

  std::span<const double, kNumActions> row(GridPos s) const {
    return std::span<const double, kNumActions>(values_.data() + state_index(s) * kNumActions, kNumActions);
  }
  std::span<double, kNumActions> row(GridPos s) {
    return std::span<double, kNumActions>(values_.data() + state_index(s) * kNumActions, kNumActions);
  }

  std::span<const double, kSize> values() const { return values_; }
  std::span<double, kSize> values() { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  static std::size_t offset(GridPos s, Action a) {
    return static_cast<std::size_t>(state_index(s) * kNumActions + action_index(a));
  }

  std::array<double, kSize> values_{};
};

// One Q-learning backup of entry (s, a). Terminal transitions bootstrap with 0.
// Returns the new value. Throws std::invalid_argument on a non-finite reward.
double q_update(QTable& q, GridPos s, Action a, double reward, GridPos s_next, bool terminal,
                const LearnParams& params);

// Argmax / argmin over actions; ties go to the lowest action index.
Action greedy_action(const QTable& q, GridPos s);
Action worst_action(const QTable& q, GridPos s);

double epsilon_at(int episode, const LearnParams& params);

Action epsilon_greedy(const QTable& q, GridPos s, double eps, Rng& rng);

// Text format: a header line "qtable <rows> <cols> <actions>" followed by one
// line per state (row-major) holding the action values in shortest
// round-trip decimal form.
void write_qtable(std::ostream& out, const QTable& q);
QTable read_qtable(std::istream& in);

}  // namespace mtirl
