#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtirl/grid.hpp"
#include "mtirl/q_table.hpp"
#include "mtirl/rng.hpp"

namespace mtirl {

struct TeacherSpec {
  int id = 0;
  GridPos goal;
  RewardProfile profile;
  // Empty means exploring starts: a uniformly random state and first action
  // every training episode.
  std::optional<GridPos> train_start;
  double train_epsilon0 = 0.2;
  int train_episodes = 1000;
  std::string label;

  friend bool operator==(const TeacherSpec&, const TeacherSpec&) = default;
};

// A trained, frozen specialist. The Q-table is never written after training.
struct Teacher {
  TeacherSpec spec;
  QTable q;
  double rho = 1.0;    // availability
  double omega = 1.0;  // accuracy
};

struct AdviceOutcome {
  std::optional<Action> action;
  bool was_consulted = false;
  // Meaningful only when consulted.
  bool was_accurate = false;
  int teacher_id = -1;
};

// Exploring-start episodes after which every specialist follows a shortest
// path from every state (checked over 60 seeds).
inline constexpr int kSpecialistTrainEpisodes = 30000;
inline constexpr int kBiasTrainEpisodes = 1000;

// Five goal specialists (0,0), (0,9), (9,0), (9,9), (5,5) on the balanced
// profile, trained with exploring starts.
std::vector<TeacherSpec> drift_roster_specs(int train_episodes = kSpecialistTrainEpisodes,
                                            double train_epsilon0 = 0.2);

// Five teachers all targeting (9,9) with heterogeneous reward profiles, start
// states and exploration rates (high reward, low penalty, balanced, high
// penalty, conservative).
std::vector<TeacherSpec> bias_roster_specs(int train_episodes = kBiasTrainEpisodes);

// Epsilon-greedy Q-learning on a static goal with the teacher's own reward
// profile. `params.eps0` is replaced by spec.train_epsilon0.
//
// 1,000 episodes leave most specialists with a few detours and occasionally
// a greedy cycle; kSpecialistTrainEpisodes removes both.
Teacher train_teacher(const TeacherSpec& spec, const LearnParams& params, int max_steps, Rng& rng);

// Trains each spec from its own stream derived from `seed`.
std::vector<Teacher> train_roster(const std::vector<TeacherSpec>& specs, const LearnParams& params, int max_steps,
                                  std::uint64_t seed, double rho, double omega);

// Availability draw, then accuracy draw. Never more than two draws.
AdviceOutcome advise(const Teacher& teacher, GridPos s, Rng& rng);

// Gaussian perception noise per coordinate, rounded half away from zero and
// clamped to the grid. sigma == 0 returns g without drawing.
GridPos perturb_goal(GridPos g, double sigma, Rng& rng);

// Roster text file: a "roster <n>" line, then per teacher one "teacher" line
// with key=value fields followed by its Q-table in write_qtable format.
void write_roster(std::ostream& out, const std::vector<Teacher>& roster);
std::vector<Teacher> read_roster(std::istream& in);

const Teacher& find_teacher(const std::vector<Teacher>& roster, int id);

}  // namespace mtirl
