#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// They use only the grid geometry and textbook formulas, never the library
// code under test.

#include <array>
#include <cmath>
#include <vector>

#include "mtirl/grid.hpp"

namespace oracle {

// Fewest steps from each state until a transition lands on the goal, by
// repeated relaxation over the move graph. The goal cell itself needs a step
// out and back unless a wall bump keeps the agent on it.
inline std::array<int, mtirl::kNumStates> steps_to_goal(mtirl::GridPos goal) {
  std::array<int, mtirl::kNumStates> d;
  d.fill(1 << 20);
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < mtirl::kNumStates; ++i) {
      const mtirl::GridPos s{i / 10, i % 10};
      const int moves[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& m : moves) {
        mtirl::GridPos n{s.row + m[0], s.col + m[1]};
        if (n.row < 0 || n.row > 9 || n.col < 0 || n.col > 9) n = s;
        const int cost = 1 + (n == goal ? 0 : d[static_cast<std::size_t>(n.row * 10 + n.col)]);
        if (cost < d[static_cast<std::size_t>(i)]) {
          d[static_cast<std::size_t>(i)] = cost;
          changed = true;
        }
      }
    }
  }
  return d;
}

// One Q-learning backup written out directly from the update rule.
inline double q_backup(double old, double reward, const double* next_row, bool terminal, double alpha,
                       double gamma) {
  double best = next_row[0];
  for (int k = 1; k < 4; ++k) best = next_row[k] > best ? next_row[k] : best;
  const double target = reward + (terminal ? 0.0 : gamma * best);
  return old + alpha * (target - old);
}

struct Decomposition {
  double a = 0, b = 0, ab = 0, e = 0, total = 0;
};

// Two-way sums of squares as sums over observations of squared deviations of
// the row, column and cell means.
inline Decomposition anova_by_means(const std::vector<std::vector<std::vector<double>>>& cells) {
  const std::size_t I = cells.size(), J = cells[0].size(), n = cells[0][0].size();
  double grand = 0.0;
  std::vector<double> row(I, 0.0), col(J, 0.0);
  std::vector<std::vector<double>> cell(I, std::vector<double>(J, 0.0));
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      for (double x : cells[i][j]) {
        grand += x;
        row[i] += x;
        col[j] += x;
        cell[i][j] += x;
      }
    }
  }
  grand /= static_cast<double>(I * J * n);
  for (auto& v : row) v /= static_cast<double>(J * n);
  for (auto& v : col) v /= static_cast<double>(I * n);
  for (auto& r : cell) {
    for (auto& v : r) v /= static_cast<double>(n);
  }
  Decomposition d;
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      for (double x : cells[i][j]) {
        d.a += (row[i] - grand) * (row[i] - grand);
        d.b += (col[j] - grand) * (col[j] - grand);
        const double inter = cell[i][j] - row[i] - col[j] + grand;
        d.ab += inter * inter;
        d.e += (x - cell[i][j]) * (x - cell[i][j]);
        d.total += (x - grand) * (x - grand);
      }
    }
  }
  return d;
}

inline bool close_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace oracle
