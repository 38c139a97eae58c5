#include "mtirl/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mtirl/format.hpp"

namespace mtirl {

std::vector<TeacherSpec> drift_roster_specs(int train_episodes, double train_epsilon0) {
  const DriftSchedule schedule = default_drift_schedule();
  const char* labels[kNumGoals] = {"Top-left", "Top-right", "Bottom-left", "Bottom-right", "Centre"};
  std::vector<TeacherSpec> specs;
  for (int i = 0; i < kNumGoals; ++i) {
    specs.push_back(TeacherSpec{.id = i,
                                .goal = schedule.goals[static_cast<std::size_t>(i)],
                                .profile = balanced_profile(),
                                .train_start = std::nullopt,
                                .train_epsilon0 = train_epsilon0,
                                .train_episodes = train_episodes,
                                .label = labels[i]});
  }
  return specs;
}

std::vector<TeacherSpec> bias_roster_specs(int train_episodes) {
  struct Row {
    const char* label;
    RewardProfile profile;
    GridPos start;
    double eps;
  };
  const Row rows[] = {
      {"High Reward", {100.0, -0.1, -10.0}, {0, 0}, 0.10},
      {"Low Penalty", {10.0, -0.01, -10.0}, {0, 2}, 0.15},
      {"Balanced", {10.0, -0.1, -10.0}, {2, 0}, 0.20},
      {"High Penalty", {10.0, -1.0, -10.0}, {3, 3}, 0.25},
      {"Conservative", {5.0, -0.05, -10.0}, {1, 1}, 0.30},
  };
  std::vector<TeacherSpec> specs;
  int id = 0;
  for (const Row& r : rows) {
    specs.push_back(TeacherSpec{.id = id++,
                                .goal = {9, 9},
                                .profile = r.profile,
                                .train_start = r.start,
                                .train_epsilon0 = r.eps,
                                .train_episodes = train_episodes,
                                .label = r.label});
  }
  return specs;
}

Teacher train_teacher(const TeacherSpec& spec, const LearnParams& params, int max_steps, Rng& rng) {
  validate(spec.profile);
  if (!in_bounds(spec.goal)) throw std::invalid_argument("teacher goal out of bounds");
  LearnParams lp = params;
  lp.eps0 = spec.train_epsilon0;
  lp.eps_final = std::min(lp.eps_final, lp.eps0);

  Teacher teacher{.spec = spec, .q = {}, .rho = 1.0, .omega = 1.0};
  QTable& q = teacher.q;
  for (int episode = 0; episode < spec.train_episodes; ++episode) {
    // Without a fixed start, episodes use exploring starts: a random state
    // and a random first action.
    const bool exploring = !spec.train_start;
    GridPos s = exploring ? state_pos(rng.uniform_int(kNumStates)) : *spec.train_start;
    const double eps = epsilon_at(episode, lp);
    for (int t = 0; t < max_steps; ++t) {
      const Action a = (exploring && t == 0) ? static_cast<Action>(rng.uniform_int(kNumActions))
                                             : epsilon_greedy(q, s, eps, rng);
      const StepOutcome out = step(s, a, spec.goal, t, spec.profile, max_steps);
      q_update(q, s, a, out.reward, out.next_state, out.terminal != Terminal::None, lp);
      s = out.next_state;
      if (out.terminal != Terminal::None) break;
    }
  }
  return teacher;
}

std::vector<Teacher> train_roster(const std::vector<TeacherSpec>& specs, const LearnParams& params, int max_steps,
                                  std::uint64_t seed, double rho, double omega) {
  std::vector<Teacher> roster;
  roster.reserve(specs.size());
  for (const TeacherSpec& spec : specs) {
    Rng rng(derive_seed(seed, kTeacherStream, static_cast<std::uint64_t>(spec.id)));
    Teacher t = train_teacher(spec, params, max_steps, rng);
    t.rho = rho;
    t.omega = omega;
    roster.push_back(std::move(t));
  }
  return roster;
}

AdviceOutcome advise(const Teacher& teacher, GridPos s, Rng& rng) {
  AdviceOutcome out;
  out.teacher_id = teacher.spec.id;
  if (!(rng.uniform() < teacher.rho)) return out;
  out.was_consulted = true;
  if (rng.uniform() < teacher.omega) {
    out.action = greedy_action(teacher.q, s);
    out.was_accurate = true;
  } else {
    out.action = worst_action(teacher.q, s);
  }
  return out;
}

GridPos perturb_goal(GridPos g, double sigma, Rng& rng) {
  if (sigma == 0.0) return g;
  const double dr = rng.normal(sigma);
  const double dc = rng.normal(sigma);
  // std::round rounds halves away from zero.
  const int row = static_cast<int>(std::round(g.row + dr));
  const int col = static_cast<int>(std::round(g.col + dc));
  return {std::clamp(row, 0, kGridSize - 1), std::clamp(col, 0, kGridSize - 1)};
}

namespace {

std::string encode_pos(GridPos p) { return std::to_string(p.row) + "," + std::to_string(p.col); }

GridPos decode_pos(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::runtime_error("roster: bad position '" + text + "'");
  GridPos p{static_cast<int>(parse_integer(text.substr(0, comma))),
            static_cast<int>(parse_integer(text.substr(comma + 1)))};
  if (!in_bounds(p)) throw std::runtime_error("roster: position out of bounds '" + text + "'");
  return p;
}

// Labels may contain spaces; they are stored with '_' in place of ' '.
std::string encode_label(std::string s) {
  std::replace(s.begin(), s.end(), ' ', '_');
  return s.empty() ? "-" : s;
}

std::string decode_label(std::string s) {
  if (s == "-") return {};
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

}  // namespace

void write_roster(std::ostream& out, const std::vector<Teacher>& roster) {
  out << "roster " << roster.size() << '\n';
  for (const Teacher& t : roster) {
    const TeacherSpec& s = t.spec;
    out << "teacher id=" << s.id << " label=" << encode_label(s.label) << " goal=" << encode_pos(s.goal)
        << " r_goal=" << format_double(s.profile.goal) << " r_step=" << format_double(s.profile.step)
        << " r_timeout=" << format_double(s.profile.timeout)
        << " start=" << (s.train_start ? encode_pos(*s.train_start) : "random")
        << " eps0=" << format_double(s.train_epsilon0) << " episodes=" << s.train_episodes
        << " rho=" << format_double(t.rho) << " omega=" << format_double(t.omega) << '\n';
    write_qtable(out, t.q);
  }
}

std::vector<Teacher> read_roster(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("roster: empty input");
  std::istringstream header(line);
  std::string tag;
  std::size_t n = 0;
  if (!(header >> tag >> n) || tag != "roster") throw std::runtime_error("roster: bad header '" + line + "'");

  std::vector<Teacher> roster;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("roster: truncated before teacher " + std::to_string(i));
    std::istringstream fields(line);
    fields >> tag;
    if (tag != "teacher") throw std::runtime_error("roster: expected teacher line, got '" + line + "'");
    std::map<std::string, std::string> kv;
    for (std::string tok; fields >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw std::runtime_error("roster: bad field '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
      auto it = kv.find(key);
      if (it == kv.end()) throw std::runtime_error(std::string("roster: missing field '") + key + "'");
      return it->second;
    };
    Teacher t;
    t.spec.id = static_cast<int>(parse_integer(get("id")));
    t.spec.label = decode_label(get("label"));
    t.spec.goal = decode_pos(get("goal"));
    t.spec.profile = {parse_double(get("r_goal")), parse_double(get("r_step")), parse_double(get("r_timeout"))};
    const std::string& start = get("start");
    if (start != "random") t.spec.train_start = decode_pos(start);
    t.spec.train_epsilon0 = parse_double(get("eps0"));
    t.spec.train_episodes = static_cast<int>(parse_integer(get("episodes")));
    t.rho = parse_double(get("rho"));
    t.omega = parse_double(get("omega"));
    t.q = read_qtable(in);
    roster.push_back(std::move(t));
  }
  return roster;
}

const Teacher& find_teacher(const std::vector<Teacher>& roster, int id) {
  for (const Teacher& t : roster) {
    if (t.spec.id == id) return t;
  }
  throw std::out_of_range("no teacher with id " + std::to_string(id));
}

}  // namespace mtirl
