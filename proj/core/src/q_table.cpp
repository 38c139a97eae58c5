#include "mtirl/q_table.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mtirl/format.hpp"

namespace mtirl {

void validate(const LearnParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(p.gamma >= 0.0 && p.gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  if (!(p.eps0 >= 0.0 && p.eps0 <= 1.0)) throw std::invalid_argument("eps0 must be in [0, 1]");
  if (!(p.eps_final >= 0.0 && p.eps_final <= p.eps0)) throw std::invalid_argument("eps_final must be in [0, eps0]");
  if (!(p.eps_decay > 0.0 && p.eps_decay <= 1.0)) throw std::invalid_argument("eps_decay must be in (0, 1]");
}

double q_update(QTable& q, GridPos s, Action a, double reward, GridPos s_next, bool terminal,
                const LearnParams& params) {
  if (!std::isfinite(reward)) throw std::invalid_argument("q_update: reward must be finite");
  double bootstrap = 0.0;
  if (!terminal) {
    const auto next = q.row(s_next);
    bootstrap = *std::max_element(next.begin(), next.end());
  }
  double& entry = q.at(s, a);
  entry += params.alpha * (reward + params.gamma * bootstrap - entry);
  return entry;
}

Action greedy_action(const QTable& q, GridPos s) {
  const auto row = q.row(s);
  // max_element returns the first maximiser.
  return static_cast<Action>(std::max_element(row.begin(), row.end()) - row.begin());
}

Action worst_action(const QTable& q, GridPos s) {
  const auto row = q.row(s);
  return static_cast<Action>(std::min_element(row.begin(), row.end()) - row.begin());
}

double epsilon_at(int episode, const LearnParams& params) {
  return std::max(params.eps_final, params.eps0 * std::pow(params.eps_decay, episode));
}

Action epsilon_greedy(const QTable& q, GridPos s, double eps, Rng& rng) {
  if (eps > 0.0 && rng.uniform() < eps) return static_cast<Action>(rng.uniform_int(kNumActions));
  return greedy_action(q, s);
}

void write_qtable(std::ostream& out, const QTable& q) {
  out << "qtable " << kGridSize << ' ' << kGridSize << ' ' << kNumActions << '\n';
  for (int i = 0; i < kNumStates; ++i) {
    const auto row = q.row(state_pos(i));
    for (int a = 0; a < kNumActions; ++a) {
      if (a) out << ' ';
      out << format_double(row[static_cast<std::size_t>(a)]);
    }
    out << '\n';
  }
}

QTable read_qtable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("qtable: missing header");
  std::istringstream header(line);
  std::string tag;
  int rows = 0, cols = 0, actions = 0;
  header >> tag >> rows >> cols >> actions;
  if (tag != "qtable") throw std::runtime_error("qtable: bad header '" + line + "'");
  if (rows != kGridSize || cols != kGridSize || actions != kNumActions) {
    throw std::runtime_error("qtable: unsupported dimensions in '" + line + "'");
  }
  QTable q;
  for (int i = 0; i < kNumStates; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("qtable: truncated at state " + std::to_string(i));
    std::istringstream fields(line);
    auto row = q.row(state_pos(i));
    for (int a = 0; a < kNumActions; ++a) {
      std::string token;
      if (!(fields >> token)) throw std::runtime_error("qtable: short row at state " + std::to_string(i));
      const double v = parse_double(token);
      if (!std::isfinite(v)) throw std::runtime_error("qtable: non-finite value at state " + std::to_string(i));
      row[static_cast<std::size_t>(a)] = v;
    }
  }
  return q;
}

}  // namespace mtirl
