#include "mtirl/student.hpp"

#include <stdexcept>

namespace mtirl {

std::pair<Action, bool> choose_action(const QTable& q, GridPos s, const AdviceOutcome& advice, double eps, Rng& rng) {
  if (advice.action) return {*advice.action, true};
  return {epsilon_greedy(q, s, eps, rng), false};
}

EpisodeRecord run_episode(QTable& student_q, std::span<const Teacher> roster, Strategy strategy,
                          SelectionState& selection, const EpisodeEnv& env, int episode, Rng& rng) {
  if (strategy != Strategy::None && roster.empty()) throw std::invalid_argument("run_episode: empty roster");
  if (roster.size() > static_cast<std::size_t>(kMaxTeachers)) throw std::invalid_argument("run_episode: roster too large");

  EpisodeRecord rec;
  rec.episode = episode;
  rec.goal_index = env.goal_index;
  const double eps = epsilon_at(episode, env.learn);

  GridPos s = env.start;
  for (int t = 0; t < env.max_steps; ++t) {
    AdviceOutcome advice;
    int teacher_id = -1;
    if (strategy == Strategy::GoalSimilarity) {
      teacher_id = select_by_goal_similarity(roster, perturb_goal(env.goal, env.sigma, rng));
    } else if (strategy == Strategy::CumulativeReward) {
      teacher_id = select_by_cumulative_reward(selection, rng);
    }
    if (teacher_id >= 0) {
      ++rec.selected_counts[static_cast<std::size_t>(teacher_id)];
      advice = advise(roster[static_cast<std::size_t>(teacher_id)], s, rng);
      if (advice.was_consulted) ++rec.consultations;
      if (advice.was_consulted && advice.was_accurate) ++rec.accurate_advice;
    }

    const auto [action, followed] = choose_action(student_q, s, advice, eps, rng);
    const StepOutcome out = step(s, action, env.goal, t, env.profile, env.max_steps);
    q_update(student_q, s, action, out.reward, out.next_state, out.terminal != Terminal::None, env.learn);

    if (followed) {
      ++rec.advice_followed;
      if (strategy == Strategy::CumulativeReward) {
        const RewardProfile& own = roster[static_cast<std::size_t>(teacher_id)].spec.profile;
        credit_reward(selection, teacher_id, step(s, action, env.goal, t, own, env.max_steps).reward);
      }
    }

    rec.total_reward += out.reward;
    rec.steps = t + 1;
    s = out.next_state;
    if (out.terminal == Terminal::Goal) rec.success = true;
    if (out.terminal != Terminal::None) break;
  }
  return rec;
}

Strategy strategy_for(Mode mode) {
  switch (mode) {
    case Mode::Baseline:
      return Strategy::None;
    case Mode::Drift:
    case Mode::Uncertainty:
      return Strategy::GoalSimilarity;
    case Mode::Bias:
      return Strategy::CumulativeReward;
  }
  return Strategy::None;
}

std::vector<EpisodeRecord> run_student(const ExperimentConfig& config, std::span<const Teacher> roster, Rng& rng) {
  const Strategy strategy = strategy_for(config.mode);
  const DriftSchedule schedule = default_drift_schedule(config.tau);
  const bool drifting = config.mode != Mode::Bias;

  QTable q;
  SelectionState selection(roster.size());
  EpisodeEnv env{.goal = {9, 9},
                 .goal_index = 0,
                 .start = {0, 0},
                 .profile = balanced_profile(),
                 .max_steps = config.max_steps,
                 .sigma = config.mode == Mode::Uncertainty ? config.sigma : 0.0,
                 .learn = config.learn};

  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(config.episodes));
  for (int episode = 0; episode < config.episodes; ++episode) {
    if (drifting) {
      env.goal_index = (episode / config.tau) % kNumGoals;
      env.goal = goal_at(episode, schedule);
    }
    records.push_back(run_episode(q, roster, strategy, selection, env, episode, rng));
  }
  return records;
}

}  // namespace mtirl
