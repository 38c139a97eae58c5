#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtirl/experiment.hpp"

namespace mtirl {

// File-system failure with the offending path in the message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-column CSV writers. Numbers use shortest round-trip formatting so
// identical results give byte-identical files.
void write_episodes_csv(std::ostream& out, const ExperimentResult& result);
void write_runs_csv(std::ostream& out, const ExperimentResult& result);
void write_sweep_csv(std::ostream& out, const ExperimentResult& result);
void write_selections_csv(std::ostream& out, const ExperimentResult& result);
void write_uncertainty_csv(std::ostream& out, const ExperimentResult& result);

// stats.json: per-cell summaries, ANOVA over (rho, omega), Cohen's d against
// the baseline, selection association statistics and uncertainty metrics,
// whichever apply to the result.
std::string stats_json(const ExperimentResult& result);

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Writes every applicable output under `dir` and finishes with
// manifest.json listing each file and its digest.
std::vector<OutputFile> emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

// Checks that every file named in dir/manifest.json exists with the recorded
// digest. Returns the names that do not match.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

struct SelectionRow {
  std::string config_id;
  int teacher_id = 0;
  long long selections = 0;
  double share = 0.0;
};

std::vector<RunSummary> read_runs_csv(std::istream& in);
std::vector<SelectionRow> read_selections_csv(std::istream& in);

std::string row_label(const std::string& config_id);

// Table of configuration, reward mean +/- sd across runs and success rate.
// Selection-share columns appear only when some row is a bias configuration.
std::string report(const std::vector<RunSummary>& summaries);

}  // namespace mtirl
