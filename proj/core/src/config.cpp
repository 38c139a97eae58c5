#include "mtirl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mtirl/format.hpp"

namespace mtirl {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Baseline:
      return "baseline";
    case Mode::Drift:
      return "drift";
    case Mode::Bias:
      return "bias";
    case Mode::Uncertainty:
      return "uncertainty";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "baseline") return Mode::Baseline;
  if (text == "drift") return Mode::Drift;
  if (text == "bias") return Mode::Bias;
  if (text == "uncertainty") return Mode::Uncertainty;
  throw ConfigError("mode", "expected baseline|drift|bias|uncertainty, got '" + std::string(text) + "'");
}

ExperimentConfig default_config(Mode mode) {
  ExperimentConfig c;
  c.mode = mode;
  if (mode == Mode::Baseline) c.rho = 0.0;
  return c;
}

void apply_desk_profile(ExperimentConfig& config) {
  config.runs = 10;
  config.episodes = 500;
  config.rho_grid = {0.2, 0.6, 1.0};
  config.omega_grid = {0.2, 0.6, 1.0};
}

namespace {

void check_unit(const char* field, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must be in [0, 1], got " + format_double(v));
}

void check_positive(const char* field, long long v) {
  if (v < 1) throw ConfigError(field, "must be >= 1, got " + std::to_string(v));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  try {
    const double v = parse_double(value);
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
  }
}

long long to_integer(std::string_view key, std::string_view value) {
  try {
    return parse_integer(value);
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
  }
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string_view item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(std::string(key), "expected true|false, got '" + std::string(value) + "'");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  check_unit("rho", c.rho);
  check_unit("omega", c.omega);
  if (!(c.sigma >= 0.0)) throw ConfigError("sigma", "must be >= 0");
  check_positive("tau", c.tau);
  check_positive("episodes", c.episodes);
  check_positive("runs", c.runs);
  check_positive("max_steps", c.max_steps);
  if (c.teacher_episodes < 0) throw ConfigError("teacher_episodes", "must be >= 0");
  if (c.bias_teacher_episodes < 0) throw ConfigError("bias_teacher_episodes", "must be >= 0");
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  try {
    validate(c.learn);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(' ')), msg);
  }
  if (c.rho_grid.empty()) throw ConfigError("rho_grid", "must not be empty");
  if (c.omega_grid.empty()) throw ConfigError("omega_grid", "must not be empty");
  if (c.sigma_grid.empty()) throw ConfigError("sigma_grid", "must not be empty");
  for (double v : c.rho_grid) check_unit("rho_grid", v);
  for (double v : c.omega_grid) check_unit("omega_grid", v);
  for (double v : c.sigma_grid) {
    if (!(v >= 0.0)) throw ConfigError("sigma_grid", "entries must be >= 0");
  }
  for (std::size_t i = 0; i < c.roster_spec.size(); ++i) {
    if (c.roster_spec[i].id != static_cast<int>(i)) throw ConfigError("roster", "teacher ids must be 0..n-1 in order");
  }
  if (c.roster_spec.size() > static_cast<std::size_t>(kNumGoals)) {
    throw ConfigError("roster", "at most " + std::to_string(kNumGoals) + " teachers");
  }
}

std::vector<TeacherSpec> resolve_roster_specs(const ExperimentConfig& c) {
  if (!c.roster_spec.empty()) return c.roster_spec;
  if (c.mode == Mode::Bias) return bias_roster_specs(c.bias_teacher_episodes);
  return drift_roster_specs(c.teacher_episodes, c.learn.eps0);
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "profile") {
    if (value == "desk") {
      apply_desk_profile(c);
    } else if (value != "full") {
      throw ConfigError("profile", "expected desk|full, got '" + std::string(value) + "'");
    }
  } else if (key == "rho") {
    c.rho = to_double(key, value);
  } else if (key == "omega") {
    c.omega = to_double(key, value);
  } else if (key == "sigma") {
    c.sigma = to_double(key, value);
  } else if (key == "tau") {
    c.tau = static_cast<int>(to_integer(key, value));
  } else if (key == "episodes") {
    c.episodes = static_cast<int>(to_integer(key, value));
  } else if (key == "runs") {
    c.runs = static_cast<int>(to_integer(key, value));
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    c.base_seed = static_cast<std::uint64_t>(s);
  } else if (key == "alpha") {
    c.learn.alpha = to_double(key, value);
  } else if (key == "gamma") {
    c.learn.gamma = to_double(key, value);
  } else if (key == "eps0") {
    c.learn.eps0 = to_double(key, value);
  } else if (key == "eps_final") {
    c.learn.eps_final = to_double(key, value);
  } else if (key == "eps_decay") {
    c.learn.eps_decay = to_double(key, value);
  } else if (key == "max_steps") {
    c.max_steps = static_cast<int>(to_integer(key, value));
  } else if (key == "teacher_episodes") {
    c.teacher_episodes = static_cast<int>(to_integer(key, value));
  } else if (key == "bias_teacher_episodes") {
    c.bias_teacher_episodes = static_cast<int>(to_integer(key, value));
  } else if (key == "rho_grid") {
    c.rho_grid = to_list(key, value);
  } else if (key == "omega_grid") {
    c.omega_grid = to_list(key, value);
  } else if (key == "sigma_grid") {
    c.sigma_grid = to_list(key, value);
  } else if (key == "threads") {
    c.threads = static_cast<int>(to_integer(key, value));
  } else if (key == "write_episodes") {
    c.write_episodes = to_bool(key, value);
  } else {
    throw ConfigError(std::string(key), "unknown key");
  }
}

ExperimentConfig parse_config_text(std::string_view text) {
  struct Entry {
    std::string key, value;
    int line;
  };
  std::vector<Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    entries.push_back({std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no});
  }

  ExperimentConfig c = default_config();
  // mode and profile set defaults that explicit keys then override.
  for (const Entry& e : entries) {
    if (e.key == "mode") c = default_config(parse_mode(e.value));
  }
  for (const Entry& e : entries) {
    if (e.key == "profile") set_config_value(c, e.key, e.value);
  }
  for (const Entry& e : entries) {
    if (e.key == "mode" || e.key == "profile") continue;
    set_config_value(c, e.key, e.value);
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "mode = " << mode_name(c.mode) << '\n'
      << "rho = " << format_double(c.rho) << '\n'
      << "omega = " << format_double(c.omega) << '\n'
      << "sigma = " << format_double(c.sigma) << '\n'
      << "tau = " << c.tau << '\n'
      << "episodes = " << c.episodes << '\n'
      << "runs = " << c.runs << '\n'
      << "seed = " << c.base_seed << '\n'
      << "alpha = " << format_double(c.learn.alpha) << '\n'
      << "gamma = " << format_double(c.learn.gamma) << '\n'
      << "eps0 = " << format_double(c.learn.eps0) << '\n'
      << "eps_final = " << format_double(c.learn.eps_final) << '\n'
      << "eps_decay = " << format_double(c.learn.eps_decay) << '\n'
      << "max_steps = " << c.max_steps << '\n'
      << "teacher_episodes = " << c.teacher_episodes << '\n'
      << "bias_teacher_episodes = " << c.bias_teacher_episodes << '\n'
      << "rho_grid = " << join(c.rho_grid) << '\n'
      << "omega_grid = " << join(c.omega_grid) << '\n'
      << "sigma_grid = " << join(c.sigma_grid) << '\n'
      << "threads = " << c.threads << '\n'
      << "write_episodes = " << (c.write_episodes ? "true" : "false") << '\n';
  return out.str();
}

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.mode == b.mode && a.rho == b.rho && a.omega == b.omega && a.sigma == b.sigma && a.tau == b.tau &&
         a.episodes == b.episodes && a.runs == b.runs && a.base_seed == b.base_seed && a.learn == b.learn &&
         a.max_steps == b.max_steps && a.teacher_episodes == b.teacher_episodes &&
         a.bias_teacher_episodes == b.bias_teacher_episodes && a.rho_grid == b.rho_grid &&
         a.omega_grid == b.omega_grid && a.sigma_grid == b.sigma_grid && a.threads == b.threads &&
         a.write_episodes == b.write_episodes && a.roster_spec == b.roster_spec;
}

}  // namespace mtirl
