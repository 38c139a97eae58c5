// mtirl: multi-teacher interactive Q-learning experiments.
//
//   mtirl train-teachers --mode drift --out roster.txt
//   mtirl run --mode drift --rho 0.6 --omega 0.6 --out results/
//   mtirl sweep --profile desk --out results/
//   mtirl report --dir results/
//
// Exit codes: 0 success, 1 unexpected failure, 2 config/validation error,
// 3 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtirl/config.hpp"
#include "mtirl/experiment.hpp"
#include "mtirl/output.hpp"
#include "mtirl/teacher.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Flags shared by every experiment subcommand. Each one, when given,
// overrides the same key from --config.
struct CommonFlags {
  std::string config_path;
  std::optional<std::string> profile;
  std::optional<std::string> mode;
  std::optional<long long> seed;
  std::optional<std::string> rho, omega, sigma;
  std::optional<int> tau, episodes, runs, threads, teacher_episodes;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Config file (key = value lines)");
    cmd->add_option("--profile", profile, "desk | full")->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--rho", rho, "Teacher availability");
    cmd->add_option("--omega", omega, "Teacher accuracy");
    cmd->add_option("--sigma", sigma, "Goal perception noise (uncertainty mode)");
    cmd->add_option("--tau", tau, "Episodes between drift events");
    cmd->add_option("--episodes", episodes, "Episodes per run");
    cmd->add_option("--runs", runs, "Runs per configuration");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    cmd->add_option("--teacher-episodes", teacher_episodes, "Teacher training episodes");
    cmd->add_option("--set", sets, "Extra key=value override, repeatable");
  }

  mtirl::ExperimentConfig resolve() const {
    mtirl::ExperimentConfig c = config_path.empty() ? mtirl::default_config() : mtirl::parse_config(config_path);
    if (mode) {
      const mtirl::Mode m = mtirl::parse_mode(*mode);
      if (config_path.empty()) c = mtirl::default_config(m);
      c.mode = m;
    }
    if (profile) mtirl::set_config_value(c, "profile", *profile);
    if (seed) mtirl::set_config_value(c, "seed", std::to_string(*seed));
    if (rho) mtirl::set_config_value(c, "rho", *rho);
    if (omega) mtirl::set_config_value(c, "omega", *omega);
    if (sigma) mtirl::set_config_value(c, "sigma", *sigma);
    if (tau) c.tau = *tau;
    if (episodes) c.episodes = *episodes;
    if (runs) c.runs = *runs;
    if (threads) c.threads = *threads;
    if (teacher_episodes) {
      if (c.mode == mtirl::Mode::Bias) {
        c.bias_teacher_episodes = *teacher_episodes;
      } else {
        c.teacher_episodes = *teacher_episodes;
      }
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw mtirl::ConfigError(kv, "expected key=value");
      mtirl::set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    mtirl::validate(c);
    return c;
  }
};

std::vector<mtirl::Teacher> load_roster(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw mtirl::IoError("cannot open roster '" + path + "'");
  try {
    return mtirl::read_roster(in);
  } catch (const std::runtime_error& e) {
    throw mtirl::IoError(path + ": " + e.what());
  }
}

void finish(const mtirl::ExperimentResult& result, const std::string& out_dir) {
  const auto files = mtirl::emit_outputs(result, out_dir);
  std::vector<mtirl::RunSummary> summaries;
  for (const auto& cell : result.cells) {
    for (const auto& run : cell.runs) summaries.push_back(run.summary);
  }
  std::cout << mtirl::report(summaries);
  std::cout << "\nwrote " << files.size() + 1 << " files to " << out_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-teacher interactive Q-learning under concept drift"};
  app.require_subcommand(1);

  CommonFlags train_flags, run_flags, sweep_flags;
  std::string roster_out = "roster.txt";
  std::string run_out = "results", sweep_out = "results", run_roster, sweep_roster, report_dir = "results";
  bool no_baseline = false;

  auto* train = app.add_subcommand("train-teachers", "Train and save a teacher roster");
  train_flags.attach(train);
  train->add_option("--mode", train_flags.mode, "drift (specialists) or bias (reward profiles)")
      ->check(CLI::IsMember({"drift", "bias"}));
  train->add_option("-o,--out", roster_out, "Roster file to write");

  auto* run = app.add_subcommand("run", "Run one experiment configuration");
  run_flags.attach(run);
  run->add_option("--mode", run_flags.mode, "baseline | drift | bias | uncertainty")
      ->check(CLI::IsMember({"baseline", "drift", "bias", "uncertainty"}));
  run->add_option("--roster", run_roster, "Pre-trained roster file");
  run->add_option("-o,--out", run_out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Factorial sweep over rho_grid x omega_grid");
  sweep_flags.attach(sweep);
  sweep->add_option("--mode", sweep_flags.mode, "drift | bias")->check(CLI::IsMember({"drift", "bias"}));
  sweep->add_option("--roster", sweep_roster, "Pre-trained roster file");
  sweep->add_flag("--no-baseline", no_baseline, "Skip the no-teacher baseline cell");
  sweep->add_option("-o,--out", sweep_out, "Output directory");

  auto* rep = app.add_subcommand("report", "Summarise runs.csv from an output directory");
  rep->add_option("-d,--dir", report_dir, "Output directory of a previous run or sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const mtirl::ExperimentConfig c = train_flags.resolve();
      const auto roster = mtirl::train_roster_for(c);
      std::ofstream out(roster_out);
      if (!out) throw mtirl::IoError("cannot open '" + roster_out + "' for writing");
      mtirl::write_roster(out, roster);
      if (!out) throw mtirl::IoError("failed writing '" + roster_out + "'");
      std::cout << "trained " << roster.size() << " teachers -> " << roster_out << '\n';
    } else if (run->parsed()) {
      const mtirl::ExperimentConfig c = run_flags.resolve();
      finish(mtirl::run_experiment(c, load_roster(run_roster)), run_out);
    } else if (sweep->parsed()) {
      const mtirl::ExperimentConfig c = sweep_flags.resolve();
      finish(mtirl::run_sweep(c, !no_baseline, load_roster(sweep_roster)), sweep_out);
    } else if (rep->parsed()) {
      const std::string path = report_dir + "/runs.csv";
      std::ifstream in(path);
      if (!in) throw mtirl::IoError("cannot open '" + path + "'");
      std::cout << mtirl::report(mtirl::read_runs_csv(in));
      for (const std::string& bad : mtirl::verify_manifest(report_dir)) {
        std::cerr << "warning: " << bad << " does not match its manifest digest\n";
      }
    }
  } catch (const mtirl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mtirl::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
