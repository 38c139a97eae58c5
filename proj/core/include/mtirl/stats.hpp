#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mtirl {

struct Summary {
  double mean = 0.0;
  // Sample standard deviation (n - 1); empty when n == 1.
  std::optional<double> stddev;
  std::size_t count = 0;
};

// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const double> values);

// One term of a fixed-effects two-way ANOVA.
struct AnovaTerm {
  double ss = 0.0;
  int df = 0;
  std::optional<double> f;            // empty when the residual mean square is 0
  std::optional<double> eta_squared;  // empty when ss_total is 0
};

struct AnovaResult {
  AnovaTerm factor_a;
  AnovaTerm factor_b;
  AnovaTerm interaction;
  double ss_residual = 0.0;
  int df_residual = 0;
  double ss_total = 0.0;
  int df_total = 0;
};

// cells[i][j] holds the replicates at level i of factor A and level j of
// factor B. The design must be balanced with at least two levels per factor
// and one replicate per cell; otherwise std::invalid_argument.
using AnovaCells = std::vector<std::vector<std::vector<double>>>;
AnovaResult two_way_anova(const AnovaCells& cells);

// (mean_a - mean_b) / pooled sd. Throws when the pooled variance is zero or
// a group is empty.
double cohens_d(std::span<const double> a, std::span<const double> b);

// Pearson chi-square statistic of a contingency table.
double chi_square(const std::vector<std::vector<long long>>& table);

// sqrt(chi2 / (N * (min(rows, cols) - 1))). Throws on a single row or column,
// negative counts or an empty table.
double cramers_v(const std::vector<std::vector<long long>>& table);

// Sample correlation. Throws on length mismatch, n < 2 or zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

}  // namespace mtirl
