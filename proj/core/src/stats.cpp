#include "mtirl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mtirl {

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty input");
  Summary s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

AnovaResult two_way_anova(const AnovaCells& cells) {
  const std::size_t a = cells.size();
  if (a < 2) throw std::invalid_argument("two_way_anova: factor A needs at least two levels");
  const std::size_t b = cells.front().size();
  if (b < 2) throw std::invalid_argument("two_way_anova: factor B needs at least two levels");
  const std::size_t n = cells.front().front().size();
  if (n < 1) throw std::invalid_argument("two_way_anova: empty cell");
  for (const auto& row : cells) {
    if (row.size() != b) throw std::invalid_argument("two_way_anova: ragged factor B levels");
    for (const auto& cell : row) {
      if (cell.size() != n) throw std::invalid_argument("two_way_anova: unbalanced design");
    }
  }

  std::vector<std::vector<double>> cell_mean(a, std::vector<double>(b, 0.0));
  std::vector<double> mean_a(a, 0.0), mean_b(b, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const auto& c = cells[i][j];
      cell_mean[i][j] = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
      mean_a[i] += cell_mean[i][j] / static_cast<double>(b);
      mean_b[j] += cell_mean[i][j] / static_cast<double>(a);
      grand += cell_mean[i][j];
    }
  }
  grand /= static_cast<double>(a * b);

  double ss_a = 0.0, ss_b = 0.0, ss_cells = 0.0, ss_res = 0.0, ss_total = 0.0;
  for (std::size_t i = 0; i < a; ++i) ss_a += (mean_a[i] - grand) * (mean_a[i] - grand);
  for (std::size_t j = 0; j < b; ++j) ss_b += (mean_b[j] - grand) * (mean_b[j] - grand);
  ss_a *= static_cast<double>(b * n);
  ss_b *= static_cast<double>(a * n);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      ss_cells += static_cast<double>(n) * (cell_mean[i][j] - grand) * (cell_mean[i][j] - grand);
      for (double x : cells[i][j]) {
        ss_res += (x - cell_mean[i][j]) * (x - cell_mean[i][j]);
        ss_total += (x - grand) * (x - grand);
      }
    }
  }

  AnovaResult r;
  r.factor_a = {ss_a, static_cast<int>(a) - 1, {}, {}};
  r.factor_b = {ss_b, static_cast<int>(b) - 1, {}, {}};
  r.interaction = {std::max(0.0, ss_cells - ss_a - ss_b), static_cast<int>((a - 1) * (b - 1)), {}, {}};
  r.ss_residual = ss_res;
  r.df_residual = static_cast<int>(a * b * (n - 1));
  r.ss_total = ss_total;
  r.df_total = static_cast<int>(a * b * n) - 1;

  const double ms_res = r.df_residual > 0 ? ss_res / r.df_residual : 0.0;
  for (AnovaTerm* term : {&r.factor_a, &r.factor_b, &r.interaction}) {
    if (ms_res > 0.0) term->f = (term->ss / term->df) / ms_res;
    if (ss_total > 0.0) term->eta_squared = term->ss / ss_total;
  }
  return r;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cohens_d: empty group");
  const Summary sa = summarize(a), sb = summarize(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  if (na + nb <= 2.0) throw std::invalid_argument("cohens_d: need more than two observations");
  const double va = sa.stddev ? *sa.stddev * *sa.stddev : 0.0;
  const double vb = sb.stddev ? *sb.stddev * *sb.stddev : 0.0;
  const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
  if (!(pooled > 0.0)) throw std::invalid_argument("cohens_d: zero pooled variance");
  return (sa.mean - sb.mean) / std::sqrt(pooled);
}

namespace {

// Drops rows and columns whose margins are zero.
std::vector<std::vector<double>> trimmed(const std::vector<std::vector<long long>>& table) {
  if (table.empty() || table.front().empty()) throw std::invalid_argument("contingency table is empty");
  const std::size_t cols = table.front().size();
  std::vector<double> col_sum(cols, 0.0);
  for (const auto& row : table) {
    if (row.size() != cols) throw std::invalid_argument("contingency table is ragged");
    for (std::size_t j = 0; j < cols; ++j) {
      if (row[j] < 0) throw std::invalid_argument("contingency table has a negative count");
      col_sum[j] += static_cast<double>(row[j]);
    }
  }
  std::vector<std::vector<double>> out;
  for (const auto& row : table) {
    std::vector<double> kept;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_sum[j] > 0.0) kept.push_back(static_cast<double>(row[j]));
    }
    if (std::accumulate(kept.begin(), kept.end(), 0.0) > 0.0) out.push_back(std::move(kept));
  }
  return out;
}

double chi_square_of(const std::vector<std::vector<double>>& t) {
  const std::size_t rows = t.size(), cols = t.front().size();
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += t[i][j];
      col_sum[j] += t[i][j];
      total += t[i][j];
    }
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      chi2 += (t[i][j] - expected) * (t[i][j] - expected) / expected;
    }
  }
  return chi2;
}

}  // namespace

double chi_square(const std::vector<std::vector<long long>>& table) {
  const auto t = trimmed(table);
  if (t.empty()) throw std::invalid_argument("contingency table has no counts");
  return chi_square_of(t);
}

double cramers_v(const std::vector<std::vector<long long>>& table) {
  const auto t = trimmed(table);
  if (t.size() < 2 || t.front().size() < 2) {
    throw std::invalid_argument("cramers_v: needs at least two non-empty rows and columns");
  }
  double total = 0.0;
  for (const auto& row : t) total += std::accumulate(row.begin(), row.end(), 0.0);
  const double k = static_cast<double>(std::min(t.size(), t.front().size()));
  return std::min(1.0, std::sqrt(chi_square_of(t) / (total * (k - 1.0))));
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson_r: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw std::invalid_argument("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace mtirl
