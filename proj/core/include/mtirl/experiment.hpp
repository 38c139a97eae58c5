#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mtirl/config.hpp"
#include "mtirl/student.hpp"
#include "mtirl/teacher.hpp"

namespace mtirl {

struct RunSummary {
  std::string config_id;
  int run = 0;
  double avg_reward = 0.0;
  double success_rate = 0.0;
  // NaN outside drift modes.
  double mean_adaptation_speed = 0.0;
  std::array<double, kMaxTeachers> selection_distribution{};
  double consultation_rate = 0.0;
  double selection_diversity = 0.0;
};

struct RunResult {
  RunSummary summary;
  std::vector<EpisodeRecord> records;
};

// One cell of an experiment: a fully resolved config and all of its runs.
struct CellResult {
  std::string config_id;
  ExperimentConfig config;
  std::vector<RunResult> runs;
};

struct CellAggregate {
  double mean_reward = 0.0;
  double std_reward = 0.0;  // across runs; NaN for a single run
  double success_rate = 0.0;
  double mean_recovery = 0.0;
  double diversity = 0.0;
  std::array<long long, kMaxTeachers> selections{};
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Teacher> roster;
  std::vector<CellResult> cells;

  const CellResult* find(const std::string& config_id) const;
};

struct RecoveryEvent {
  int episode = 0;   // drift episode
  int recovery = 0;  // 1-based index of the first positive-reward episode, or tau
  bool censored = false;
};

// Recovery after each drift event: episodes until total reward first exceeds
// zero, capped at tau when the cycle never gets there.
std::vector<RecoveryEvent> adaptation_speed(std::span<const EpisodeRecord> trace, int tau);

// Mean over goal phases of the selection entropy within that phase,
// normalised by log(5). Zero when every phase always uses one teacher.
double selection_diversity(std::span<const EpisodeRecord> trace);

double normalized_entropy(std::span<const long long> counts);

RunSummary summarize_run(const std::string& config_id, int run, std::span<const EpisodeRecord> records,
                         const ExperimentConfig& config);

CellAggregate aggregate(const CellResult& cell);

std::string config_id_for(const ExperimentConfig& cell);

// Runs every run of one cell, fanned out over `config.threads` workers. Run r
// is seeded with derive_seed(base_seed, cell_index, r).
CellResult run_cell(const ExperimentConfig& cell, std::span<const Teacher> roster, std::uint64_t cell_index);

// Trains the roster for `config` from its base seed.
std::vector<Teacher> train_roster_for(const ExperimentConfig& config);

// Each runner trains the roster from config.base_seed unless a pre-trained
// roster is supplied.
ExperimentResult run_baseline(const ExperimentConfig& config);

// One cell at config.rho / config.omega in config.mode (baseline, drift or bias).
ExperimentResult run_single(const ExperimentConfig& config, std::vector<Teacher> roster = {});

// Full factorial over rho_grid x omega_grid in config.mode (drift or bias).
// In drift mode a no-teacher baseline cell is appended when `with_baseline`.
ExperimentResult run_sweep(const ExperimentConfig& config, bool with_baseline = true, std::vector<Teacher> roster = {});

// Goal-uncertainty ablation: one drift cell per sigma in sigma_grid.
ExperimentResult run_uncertainty(const ExperimentConfig& config, std::vector<Teacher> roster = {});

// Dispatches on config.mode.
ExperimentResult run_experiment(const ExperimentConfig& config, std::vector<Teacher> roster = {});

// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

inline constexpr std::uint64_t kBaselineCell = 0xba5e;

}  // namespace mtirl
