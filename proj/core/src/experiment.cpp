#include "mtirl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "mtirl/format.hpp"
#include "mtirl/stats.hpp"

namespace mtirl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_drift(Mode m) { return m == Mode::Baseline || m == Mode::Drift || m == Mode::Uncertainty; }

void set_availability(std::vector<Teacher>& roster, double rho, double omega) {
  for (Teacher& t : roster) {
    t.rho = rho;
    t.omega = omega;
  }
}

}  // namespace

const CellResult* ExperimentResult::find(const std::string& config_id) const {
  for (const CellResult& c : cells) {
    if (c.config_id == config_id) return &c;
  }
  return nullptr;
}

std::vector<RecoveryEvent> adaptation_speed(std::span<const EpisodeRecord> trace, int tau) {
  std::vector<RecoveryEvent> events;
  const int n = static_cast<int>(trace.size());
  for (int t = tau; t < n; t += tau) {
    RecoveryEvent ev{.episode = t, .recovery = tau, .censored = true};
    for (int k = 0; k < tau && t + k < n; ++k) {
      if (trace[static_cast<std::size_t>(t + k)].total_reward > 0.0) {
        ev.recovery = k + 1;
        ev.censored = false;
        break;
      }
    }
    events.push_back(ev);
  }
  return events;
}

double normalized_entropy(std::span<const long long> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0LL));
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (long long c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(kMaxTeachers));
}

double selection_diversity(std::span<const EpisodeRecord> trace) {
  std::array<std::array<long long, kMaxTeachers>, kNumGoals> per_phase{};
  for (const EpisodeRecord& r : trace) {
    auto& row = per_phase[static_cast<std::size_t>(r.goal_index % kNumGoals)];
    for (std::size_t i = 0; i < row.size(); ++i) row[i] += r.selected_counts[i];
  }
  double sum = 0.0;
  int phases = 0;
  for (const auto& row : per_phase) {
    if (std::accumulate(row.begin(), row.end(), 0LL) == 0) continue;
    sum += normalized_entropy(row);
    ++phases;
  }
  return phases ? sum / phases : 0.0;
}

RunSummary summarize_run(const std::string& config_id, int run, std::span<const EpisodeRecord> records,
                         const ExperimentConfig& config) {
  RunSummary s;
  s.config_id = config_id;
  s.run = run;
  long long steps = 0, consultations = 0;
  std::array<long long, kMaxTeachers> selected{};
  double reward = 0.0, successes = 0.0;
  for (const EpisodeRecord& r : records) {
    reward += r.total_reward;
    successes += r.success ? 1.0 : 0.0;
    steps += r.steps;
    consultations += r.consultations;
    for (std::size_t i = 0; i < selected.size(); ++i) selected[i] += r.selected_counts[i];
  }
  const double n = static_cast<double>(records.size());
  s.avg_reward = n > 0 ? reward / n : kNaN;
  s.success_rate = n > 0 ? successes / n : kNaN;
  s.consultation_rate = steps > 0 ? static_cast<double>(consultations) / static_cast<double>(steps) : 0.0;

  const long long total_sel = std::accumulate(selected.begin(), selected.end(), 0LL);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    s.selection_distribution[i] = total_sel > 0 ? static_cast<double>(selected[i]) / static_cast<double>(total_sel) : 0.0;
  }

  s.mean_adaptation_speed = kNaN;
  if (has_drift(config.mode)) {
    const auto events = adaptation_speed(records, config.tau);
    if (!events.empty()) {
      double sum = 0.0;
      for (const RecoveryEvent& e : events) sum += e.recovery;
      s.mean_adaptation_speed = sum / static_cast<double>(events.size());
    }
  }
  s.selection_diversity = selection_diversity(records);
  return s;
}

CellAggregate aggregate(const CellResult& cell) {
  CellAggregate agg;
  std::vector<double> rewards;
  double success = 0.0, recovery = 0.0, diversity = 0.0;
  int recovery_n = 0;
  for (const RunResult& r : cell.runs) {
    rewards.push_back(r.summary.avg_reward);
    success += r.summary.success_rate;
    diversity += r.summary.selection_diversity;
    if (!std::isnan(r.summary.mean_adaptation_speed)) {
      recovery += r.summary.mean_adaptation_speed;
      ++recovery_n;
    }
    for (const EpisodeRecord& e : r.records) {
      for (std::size_t i = 0; i < agg.selections.size(); ++i) agg.selections[i] += e.selected_counts[i];
    }
  }
  if (rewards.empty()) {
    agg.mean_reward = agg.std_reward = agg.success_rate = agg.mean_recovery = kNaN;
    return agg;
  }
  const Summary summary = summarize(rewards);
  agg.mean_reward = summary.mean;
  agg.std_reward = summary.stddev.value_or(kNaN);
  const double n = static_cast<double>(cell.runs.size());
  agg.success_rate = success / n;
  agg.diversity = diversity / n;
  agg.mean_recovery = recovery_n ? recovery / recovery_n : kNaN;
  return agg;
}

std::string config_id_for(const ExperimentConfig& cell) {
  switch (cell.mode) {
    case Mode::Baseline:
      return "baseline";
    case Mode::Drift:
      return "drift_rho" + format_double(cell.rho) + "_omega" + format_double(cell.omega);
    case Mode::Bias:
      return "bias_rho" + format_double(cell.rho) + "_omega" + format_double(cell.omega);
    case Mode::Uncertainty:
      return "uncertainty_sigma" + format_double(cell.sigma);
  }
  return "unknown";
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

CellResult run_cell(const ExperimentConfig& cell, std::span<const Teacher> roster, std::uint64_t cell_index) {
  validate(cell);
  CellResult result{.config_id = config_id_for(cell), .config = cell, .runs = {}};
  result.runs.resize(static_cast<std::size_t>(cell.runs));
  parallel_for(cell.runs, cell.threads, [&](int run) {
    Rng rng(derive_seed(cell.base_seed, cell_index, static_cast<std::uint64_t>(run)));
    RunResult& out = result.runs[static_cast<std::size_t>(run)];
    out.records = run_student(cell, roster, rng);
    out.summary = summarize_run(result.config_id, run, out.records, cell);
  });
  return result;
}

std::vector<Teacher> train_roster_for(const ExperimentConfig& config) {
  validate(config);
  return train_roster(resolve_roster_specs(config), config.learn, config.max_steps, config.base_seed, config.rho,
                      config.omega);
}

ExperimentResult run_baseline(const ExperimentConfig& config) {
  ExperimentConfig cell = config;
  cell.mode = Mode::Baseline;
  cell.rho = 0.0;
  validate(cell);
  ExperimentResult result{.config = cell, .roster = {}, .cells = {}};
  result.cells.push_back(run_cell(cell, {}, kBaselineCell));
  return result;
}

ExperimentResult run_single(const ExperimentConfig& config, std::vector<Teacher> roster) {
  if (config.mode == Mode::Baseline) return run_baseline(config);
  if (config.mode == Mode::Uncertainty) return run_uncertainty(config, std::move(roster));
  validate(config);
  if (roster.empty()) roster = train_roster_for(config);
  set_availability(roster, config.rho, config.omega);
  ExperimentResult result{.config = config, .roster = roster, .cells = {}};
  result.cells.push_back(run_cell(config, roster, 0));
  return result;
}

ExperimentResult run_sweep(const ExperimentConfig& config, bool with_baseline, std::vector<Teacher> roster) {
  validate(config);
  if (config.mode != Mode::Drift && config.mode != Mode::Bias) {
    throw ConfigError("mode", "sweep needs mode drift or bias");
  }
  if (roster.empty()) roster = train_roster_for(config);
  ExperimentResult result{.config = config, .roster = roster, .cells = {}};
  std::uint64_t index = 0;
  for (double rho : config.rho_grid) {
    for (double omega : config.omega_grid) {
      ExperimentConfig cell = config;
      cell.rho = rho;
      cell.omega = omega;
      set_availability(roster, rho, omega);
      result.cells.push_back(run_cell(cell, roster, index++));
    }
  }
  if (with_baseline && config.mode == Mode::Drift) {
    result.cells.push_back(run_baseline(config).cells.front());
  }
  return result;
}

ExperimentResult run_uncertainty(const ExperimentConfig& config, std::vector<Teacher> roster) {
  ExperimentConfig base = config;
  base.mode = Mode::Uncertainty;
  validate(base);
  if (roster.empty()) roster = train_roster_for(base);
  set_availability(roster, base.rho, base.omega);
  ExperimentResult result{.config = base, .roster = roster, .cells = {}};
  std::uint64_t index = 0;
  for (double sigma : base.sigma_grid) {
    ExperimentConfig cell = base;
    cell.sigma = sigma;
    result.cells.push_back(run_cell(cell, roster, index++));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::vector<Teacher> roster) {
  switch (config.mode) {
    case Mode::Baseline:
      return run_baseline(config);
    case Mode::Uncertainty:
      return run_uncertainty(config, std::move(roster));
    case Mode::Drift:
    case Mode::Bias:
      return run_single(config, std::move(roster));
  }
  return {};
}

}  // namespace mtirl
