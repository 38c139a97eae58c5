#include "mtirl/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>
#include "mtirl/format.hpp"
#include "mtirl/stats.hpp"

#ifndef MTIRL_VERSION
#define MTIRL_VERSION "unknown"
#endif

namespace mtirl {

using nlohmann::json;

namespace {

std::string fmt(double v) { return format_double(v); }

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool is_bias(const std::string& config_id) { return config_id.rfind("bias", 0) == 0; }

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_episodes_csv(std::ostream& out, const ExperimentResult& result) {
  out << "config_id,run,episode,goal_index,reward,steps,success,consultations,advice_followed,accurate_advice";
  for (int i = 0; i < kMaxTeachers; ++i) out << ",sel_t" << i;
  out << '\n';
  for (const CellResult& cell : result.cells) {
    for (const RunResult& run : cell.runs) {
      for (const EpisodeRecord& e : run.records) {
        out << cell.config_id << ',' << run.summary.run << ',' << e.episode << ',' << e.goal_index << ','
            << fmt(e.total_reward) << ',' << e.steps << ',' << (e.success ? 1 : 0) << ',' << e.consultations << ','
            << e.advice_followed << ',' << e.accurate_advice;
        for (int c : e.selected_counts) out << ',' << c;
        out << '\n';
      }
    }
  }
}

void write_runs_csv(std::ostream& out, const ExperimentResult& result) {
  out << "config_id,run,avg_reward,success_rate,mean_adaptation_speed,consultation_rate";
  for (int i = 0; i < kMaxTeachers; ++i) out << ",sel_share_t" << i;
  out << '\n';
  for (const CellResult& cell : result.cells) {
    for (const RunResult& run : cell.runs) {
      const RunSummary& s = run.summary;
      out << s.config_id << ',' << s.run << ',' << fmt(s.avg_reward) << ',' << fmt(s.success_rate) << ','
          << fmt(s.mean_adaptation_speed) << ',' << fmt(s.consultation_rate);
      for (double p : s.selection_distribution) out << ',' << fmt(p);
      out << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const ExperimentResult& result) {
  out << "rho,omega,mean_reward,std_reward,success_rate,mean_recovery\n";
  for (const CellResult& cell : result.cells) {
    if (cell.config.mode != Mode::Drift && cell.config.mode != Mode::Bias) continue;
    const CellAggregate agg = aggregate(cell);
    out << fmt(cell.config.rho) << ',' << fmt(cell.config.omega) << ',' << fmt(agg.mean_reward) << ','
        << fmt(agg.std_reward) << ',' << fmt(agg.success_rate) << ',' << fmt(agg.mean_recovery) << '\n';
  }
}

void write_selections_csv(std::ostream& out, const ExperimentResult& result) {
  out << "config_id,teacher_id,selections,share\n";
  for (const CellResult& cell : result.cells) {
    if (cell.config.mode == Mode::Baseline) continue;
    const CellAggregate agg = aggregate(cell);
    const long long total = std::accumulate(agg.selections.begin(), agg.selections.end(), 0LL);
    const std::size_t n = std::min(result.roster.size(), agg.selections.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double share = total > 0 ? static_cast<double>(agg.selections[i]) / static_cast<double>(total) : 0.0;
      out << cell.config_id << ',' << i << ',' << agg.selections[i] << ',' << fmt(share) << '\n';
    }
  }
}

void write_uncertainty_csv(std::ostream& out, const ExperimentResult& result) {
  out << "sigma,mean_reward,std_reward,success_rate,mean_recovery,diversity\n";
  for (const CellResult& cell : result.cells) {
    if (cell.config.mode != Mode::Uncertainty) continue;
    const CellAggregate agg = aggregate(cell);
    out << fmt(cell.config.sigma) << ',' << fmt(agg.mean_reward) << ',' << fmt(agg.std_reward) << ','
        << fmt(agg.success_rate) << ',' << fmt(agg.mean_recovery) << ',' << fmt(agg.diversity) << '\n';
  }
}

namespace {

std::vector<double> run_rewards(const CellResult& cell) {
  std::vector<double> v;
  for (const RunResult& r : cell.runs) v.push_back(r.summary.avg_reward);
  return v;
}

json anova_json(const ExperimentResult& result) {
  std::vector<double> rhos, omegas;
  for (const CellResult& c : result.cells) {
    if (c.config.mode != Mode::Drift && c.config.mode != Mode::Bias) continue;
    if (std::find(rhos.begin(), rhos.end(), c.config.rho) == rhos.end()) rhos.push_back(c.config.rho);
    if (std::find(omegas.begin(), omegas.end(), c.config.omega) == omegas.end()) omegas.push_back(c.config.omega);
  }
  if (rhos.size() < 2 || omegas.size() < 2) return nullptr;
  AnovaCells cells(rhos.size(), std::vector<std::vector<double>>(omegas.size()));
  for (const CellResult& c : result.cells) {
    if (c.config.mode != Mode::Drift && c.config.mode != Mode::Bias) continue;
    const auto i = static_cast<std::size_t>(std::find(rhos.begin(), rhos.end(), c.config.rho) - rhos.begin());
    const auto j = static_cast<std::size_t>(std::find(omegas.begin(), omegas.end(), c.config.omega) - omegas.begin());
    cells[i][j] = run_rewards(c);
  }
  AnovaResult r;
  try {
    r = two_way_anova(cells);
  } catch (const std::invalid_argument& e) {
    return json{{"error", e.what()}};
  }
  auto term = [](const AnovaTerm& t) {
    return json{{"ss", t.ss}, {"df", t.df}, {"f", number_or_null(t.f)}, {"eta_squared", number_or_null(t.eta_squared)}};
  };
  return json{{"response", "run avg_reward"},
              {"rho", term(r.factor_a)},
              {"omega", term(r.factor_b)},
              {"interaction", term(r.interaction)},
              {"residual", {{"ss", r.ss_residual}, {"df", r.df_residual}}},
              {"total", {{"ss", r.ss_total}, {"df", r.df_total}}}};
}

json cohens_d_json(const ExperimentResult& result) {
  const CellResult* baseline = result.find("baseline");
  if (!baseline) return nullptr;
  const CellResult* best = nullptr;
  double best_mean = -INFINITY;
  for (const CellResult& c : result.cells) {
    if (c.config.mode != Mode::Drift) continue;
    if (c.config.rho == 1.0 && c.config.omega == 1.0) {
      best = &c;
      break;
    }
    const double m = aggregate(c).mean_reward;
    if (m > best_mean) {
      best_mean = m;
      best = &c;
    }
  }
  if (!best) return nullptr;
  const auto a = run_rewards(*best), b = run_rewards(*baseline);
  const double mean_a = summarize(a).mean, mean_b = summarize(b).mean;
  json out{{"group_a", best->config_id},
           {"group_b", baseline->config_id},
           {"mean_a", mean_a},
           {"mean_b", mean_b},
           {"delta", mean_a - mean_b}};
  try {
    out["d"] = cohens_d(a, b);
  } catch (const std::invalid_argument& e) {
    out["d"] = nullptr;
    out["error"] = e.what();
  }
  return out;
}

json bias_json(const ExperimentResult& result) {
  json cells = json::array();
  for (const CellResult& c : result.cells) {
    if (c.config.mode != Mode::Bias) continue;
    std::vector<std::vector<long long>> table;
    std::array<long long, kMaxTeachers> totals{};
    for (const RunResult& r : c.runs) {
      std::vector<long long> row(result.roster.size(), 0);
      for (const EpisodeRecord& e : r.records) {
        for (std::size_t i = 0; i < row.size(); ++i) row[i] += e.selected_counts[i];
      }
      for (std::size_t i = 0; i < row.size(); ++i) totals[i] += row[i];
      table.push_back(std::move(row));
    }
    const long long grand = std::accumulate(totals.begin(), totals.end(), 0LL);
    std::vector<double> share, r_goal, r_step;
    for (std::size_t i = 0; i < result.roster.size(); ++i) {
      share.push_back(grand > 0 ? static_cast<double>(totals[i]) / static_cast<double>(grand) : 0.0);
      r_goal.push_back(result.roster[i].spec.profile.goal);
      r_step.push_back(result.roster[i].spec.profile.step);
    }
    json entry{{"config_id", c.config_id}, {"selection_share", share}};
    const auto modal = std::max_element(share.begin(), share.end()) - share.begin();
    entry["modal_teacher"] = modal;
    try {
      entry["cramers_v_run_by_teacher"] = cramers_v(table);
      entry["chi_square"] = chi_square(table);
    } catch (const std::invalid_argument& e) {
      entry["cramers_v_run_by_teacher"] = nullptr;
      entry["cramers_v_error"] = e.what();
    }
    try {
      entry["pearson_r_goal_reward_vs_share"] = pearson_r(r_goal, share);
      entry["pearson_r_step_reward_vs_share"] = pearson_r(r_step, share);
    } catch (const std::invalid_argument& e) {
      entry["pearson_error"] = e.what();
    }
    cells.push_back(std::move(entry));
  }
  return cells.empty() ? json(nullptr) : cells;
}

json uncertainty_json(const ExperimentResult& result) {
  json rows = json::array();
  double reward_at_zero = NAN;
  for (const CellResult& c : result.cells) {
    if (c.config.mode != Mode::Uncertainty) continue;
    const CellAggregate agg = aggregate(c);
    if (c.config.sigma == 0.0) reward_at_zero = agg.mean_reward;
    rows.push_back({{"sigma", c.config.sigma},
                    {"mean_reward", number_or_null(agg.mean_reward)},
                    {"success_rate", number_or_null(agg.success_rate)},
                    {"diversity", agg.diversity}});
  }
  if (rows.empty()) return nullptr;
  // Relative change against sigma = 0, reported for comparison only.
  for (json& row : rows) {
    const double m = row["mean_reward"].is_null() ? NAN : row["mean_reward"].get<double>();
    row["relative_change_vs_sigma0_pct"] =
        number_or_null(std::isnan(reward_at_zero) || reward_at_zero == 0.0
                           ? NAN
                           : 100.0 * (m - reward_at_zero) / std::abs(reward_at_zero));
  }
  return rows;
}

}  // namespace

std::string stats_json(const ExperimentResult& result) {
  json cells = json::array();
  for (const CellResult& c : result.cells) {
    const CellAggregate agg = aggregate(c);
    cells.push_back({{"config_id", c.config_id},
                     {"runs", c.runs.size()},
                     {"mean_reward", number_or_null(agg.mean_reward)},
                     {"std_reward", number_or_null(agg.std_reward)},
                     {"success_rate", number_or_null(agg.success_rate)},
                     {"mean_recovery", number_or_null(agg.mean_recovery)}});
  }
  json doc{{"cells", cells},
           {"anova", anova_json(result)},
           {"cohens_d", cohens_d_json(result)},
           {"bias", bias_json(result)},
           {"uncertainty", uncertainty_json(result)}};
  return doc.dump(2) + "\n";
}

std::string sha256_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

namespace {

OutputFile write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  return {name, sha256_hex(content), content.size()};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename Writer>
std::string render(Writer writer, const ExperimentResult& result) {
  std::ostringstream out;
  writer(out, result);
  return out.str();
}

}  // namespace

std::vector<OutputFile> emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  bool any_uncertainty = false;
  for (const CellResult& c : result.cells) any_uncertainty |= c.config.mode == Mode::Uncertainty;

  std::vector<OutputFile> files;
  if (result.config.write_episodes) files.push_back(write_file(dir, "episodes.csv", render(write_episodes_csv, result)));
  files.push_back(write_file(dir, "runs.csv", render(write_runs_csv, result)));
  files.push_back(write_file(dir, "selections.csv", render(write_selections_csv, result)));
  files.push_back(write_file(dir, "sweep.csv", render(write_sweep_csv, result)));
  if (any_uncertainty) files.push_back(write_file(dir, "uncertainty.csv", render(write_uncertainty_csv, result)));
  files.push_back(write_file(dir, "stats.json", stats_json(result)));

  json manifest{{"version", MTIRL_VERSION},
                {"timestamp", utc_timestamp()},
                {"base_seed", result.config.base_seed},
                {"config", serialize_config(result.config)},
                {"files", json::array()}};
  for (const OutputFile& f : files) {
    manifest["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  write_file(dir, "manifest.json", manifest.dump(2) + "\n");
  return files;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot read '" + (dir / "manifest.json").string() + "'");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("malformed manifest '" + (dir / "manifest.json").string() + "': " + e.what());
  }
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("files")) {
    const std::string name = f.at("name");
    const auto path = dir / name;
    if (!std::filesystem::exists(path) || sha256_file(path) != f.at("sha256").get<std::string>()) bad.push_back(name);
  }
  return bad;
}

std::vector<RunSummary> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("config_id,run,avg_reward", 0) != 0) {
    throw IoError("runs.csv: unexpected header");
  }
  std::vector<RunSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6 + kMaxTeachers) throw IoError("runs.csv: wrong column count in '" + line + "'");
    RunSummary s;
    s.config_id = f[0];
    s.run = static_cast<int>(parse_integer(f[1]));
    s.avg_reward = parse_double(f[2]);
    s.success_rate = parse_double(f[3]);
    s.mean_adaptation_speed = parse_double(f[4]);
    s.consultation_rate = parse_double(f[5]);
    for (int i = 0; i < kMaxTeachers; ++i) s.selection_distribution[static_cast<std::size_t>(i)] = parse_double(f[static_cast<std::size_t>(6 + i)]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SelectionRow> read_selections_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "config_id,teacher_id,selections,share") {
    throw IoError("selections.csv: unexpected header");
  }
  std::vector<SelectionRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw IoError("selections.csv: wrong column count in '" + line + "'");
    out.push_back({f[0], static_cast<int>(parse_integer(f[1])), parse_integer(f[2]), parse_double(f[3])});
  }
  return out;
}

std::string row_label(const std::string& id) {
  if (id == "baseline") return "Q-learning (no teachers)";
  auto param = [&](const std::string& key) -> std::string {
    const auto pos = id.find(key);
    if (pos == std::string::npos) return "?";
    const auto start = pos + key.size();
    return id.substr(start, id.find('_', start) - start);
  };
  if (id.rfind("drift", 0) == 0) return "Drift (rho=" + param("rho") + ", omega=" + param("omega") + ")";
  if (id.rfind("bias", 0) == 0) return "Bias (rho=" + param("rho") + ", omega=" + param("omega") + ")";
  if (id.rfind("uncertainty", 0) == 0) return "Goal uncertainty (sigma=" + param("sigma") + ")";
  return id;
}

std::string report(const std::vector<RunSummary>& summaries) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunSummary*>> groups;
  bool selection_columns = false;
  for (const RunSummary& s : summaries) {
    if (!groups.count(s.config_id)) order.push_back(s.config_id);
    groups[s.config_id].push_back(&s);
    selection_columns |= is_bias(s.config_id);
  }

  std::ostringstream out;
  out << std::left << std::setw(36) << "Configuration" << std::setw(22) << "Avg. Reward" << std::setw(10) << "Success";
  if (selection_columns) {
    for (int i = 0; i < kMaxTeachers; ++i) out << std::setw(9) << ("Sel T" + std::to_string(i));
  }
  out << '\n';

  for (const std::string& id : order) {
    const auto& runs = groups[id];
    std::vector<double> rewards;
    double success = 0.0;
    std::array<double, kMaxTeachers> shares{};
    for (const RunSummary* s : runs) {
      rewards.push_back(s->avg_reward);
      success += s->success_rate;
      for (std::size_t i = 0; i < shares.size(); ++i) shares[i] += s->selection_distribution[i] / runs.size();
    }
    const Summary sum = summarize(rewards);
    std::ostringstream reward;
    reward << std::fixed << std::setprecision(2) << sum.mean << " +/- ";
    if (sum.stddev) {
      reward << *sum.stddev;
    } else {
      reward << "n/a (n=1)";
    }
    std::ostringstream rate;
    rate << std::fixed << std::setprecision(1) << 100.0 * success / runs.size() << '%';
    out << std::setw(36) << row_label(id) << std::setw(22) << reward.str() << std::setw(10) << rate.str();
    if (selection_columns) {
      for (double p : shares) {
        std::ostringstream cell;
        if (is_bias(id)) {
          cell << std::fixed << std::setprecision(2) << 100.0 * p << '%';
        } else {
          cell << "--";
        }
        out << std::setw(9) << cell.str();
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mtirl
