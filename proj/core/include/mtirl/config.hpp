#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtirl/grid.hpp"
#include "mtirl/q_table.hpp"
#include "mtirl/teacher.hpp"

namespace mtirl {

enum class Mode { Baseline, Drift, Bias, Uncertainty };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view text);

// Raised for unknown keys and out-of-range values. The message names the field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Mode mode = Mode::Drift;
  double rho = 1.0;
  double omega = 1.0;
  double sigma = 0.0;
  int tau = 10;
  int episodes = 1000;
  int runs = 50;
  std::uint64_t base_seed = 42;

  LearnParams learn;
  int max_steps = 100;
  int teacher_episodes = kSpecialistTrainEpisodes;
  int bias_teacher_episodes = kBiasTrainEpisodes;

  // Factorial grids used by `sweep` and the uncertainty ablation.
  std::vector<double> rho_grid = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> omega_grid = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> sigma_grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

  // Worker threads for run fan-out; 0 means hardware concurrency.
  int threads = 0;
  bool write_episodes = true;

  // Teacher roster; empty means the default roster for `mode`.
  std::vector<TeacherSpec> roster_spec;
};

// Full-scale defaults (50 runs x 1,000 episodes, 5 x 5 grid) for the given mode.
ExperimentConfig default_config(Mode mode = Mode::Drift);

// Small profile for CI: 10 runs x 500 episodes, 3 x 3 grid {0.2, 0.6, 1.0}.
void apply_desk_profile(ExperimentConfig& config);

// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig& config);

// Roster specs for the config: the explicit list if set, else the default
// roster for the mode.
std::vector<TeacherSpec> resolve_roster_specs(const ExperimentConfig& config);

// Flat "key = value" text, one key per line, '#' starts a comment. Lists are
// comma separated. Unknown keys and bad values raise ConfigError.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::string& path);

// Applies one key/value pair; shared by the file parser and CLI overrides.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

// Writes every key so that parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace mtirl
