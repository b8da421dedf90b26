#include "relaymon/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaymon {

namespace {

// maximize c.x  s.t.  A x <= b, x >= 0, with b >= 0.
// Returns optimum; fills x and the duals y (one per constraint).
double simplex_max(const std::vector<std::vector<double>>& A,
                   const std::vector<double>& b, const std::vector<double>& c,
                   std::vector<double>& x, std::vector<double>& y) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  const int width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][width - 1] = b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-11;
  for (int iter = 0; iter < 10000; ++iter) {
    int enter = -1;  // Bland: lowest eligible index
    for (int j = 0; j < n + m; ++j)
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        double ratio = t[i][width - 1] / t[i][enter];
        if (ratio < best_ratio - eps ||
            (ratio < best_ratio + eps &&
             (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) throw std::runtime_error("simplex: unbounded");

    double piv = t[leave][enter];
    for (int j = 0; j < width; ++j) t[leave][j] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = t[i][width - 1];
  y.assign(m, 0.0);
  for (int i = 0; i < m; ++i) y[i] = t[m][n + i];
  return t[m][width - 1];
}

}  // namespace

ZeroSumSolution solve_zero_sum(
    const std::vector<std::vector<double>>& payoff) {
  const int rows = static_cast<int>(payoff.size());
  const int cols = static_cast<int>(payoff[0].size());

  double lo = payoff[0][0];
  for (const auto& r : payoff)
    for (double v : r) lo = std::min(lo, v);
  double shift = 1.0 - lo;  // make every entry >= 1

  // Column player's scaled program: max sum(z) s.t. U' z <= 1, z >= 0.
  std::vector<std::vector<double>> A(rows, std::vector<double>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) A[r][c] = payoff[r][c] + shift;
  std::vector<double> b(rows, 1.0), obj(cols, 1.0), z, y;
  double total = simplex_max(A, b, obj, z, y);
  if (total <= 0.0) throw std::runtime_error("zero-sum solve failed");

  ZeroSumSolution sol;
  double value_shifted = 1.0 / total;
  sol.value = value_shifted - shift;
  sol.col_strategy.assign(cols, 0.0);
  for (int c = 0; c < cols; ++c) sol.col_strategy[c] = z[c] * value_shifted;
  sol.row_strategy.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) sol.row_strategy[r] = y[r] * value_shifted;

  // normalize away rounding residue
  auto renorm = [](std::vector<double>& v) {
    double s = 0.0;
    for (double& p : v) {
      if (p < 0.0 && p > -1e-9) p = 0.0;
      s += p;
    }
    for (double& p : v) p /= s;
  };
  renorm(sol.row_strategy);
  renorm(sol.col_strategy);
  return sol;
}

namespace {

// Payoff matrix for player k against a single responding opponent j, the
// remaining opponents frozen at `others` (mixed).
std::vector<std::vector<double>> response_matrix(
    const StageGame& game, int k, int j,
    const std::vector<std::vector<double>>& mixed) {
  const int K = game.player_count();
  std::vector<std::vector<double>> mat(
      game.action_count(k), std::vector<double>(game.action_count(j), 0.0));
  std::vector<int> profile(K);
  for (size_t flat = 0; flat < game.profile_count(); ++flat) {
    game.profile_unpack(flat, profile);
    double w = 1.0;
    for (int p = 0; p < K; ++p) {
      if (p == k || p == j) continue;
      w *= mixed[p][profile[p]];
    }
    if (w == 0.0) continue;
    mat[profile[k]][profile[j]] += w * game.utility_flat(k, flat);
  }
  return mat;
}

double best_response_value(const StageGame& game, int k,
                           const std::vector<std::vector<double>>& mixed) {
  const int K = game.player_count();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> profile(K);
  for (int a = 0; a < game.action_count(k); ++a) {
    double v = 0.0;
    for (size_t flat = 0; flat < game.profile_count(); ++flat) {
      game.profile_unpack(flat, profile);
      if (profile[k] != a) continue;
      double w = 1.0;
      for (int p = 0; p < K; ++p)
        if (p != k) w *= mixed[p][profile[p]];
      v += w * game.utility_flat(k, flat);
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

MinmaxLevels minmax_levels(const StageGame& game) {
  const int K = game.player_count();
  MinmaxLevels out;
  out.values.assign(K, 0.0);
  out.punishments.resize(K);
  out.exact = (K == 2);

  for (int k = 0; k < K; ++k) {
    if (K == 2) {
      int j = 1 - k;
      std::vector<std::vector<double>> mat(
          game.action_count(k),
          std::vector<double>(game.action_count(j), 0.0));
      std::vector<int> profile(2);
      for (int a = 0; a < game.action_count(k); ++a)
        for (int bq = 0; bq < game.action_count(j); ++bq) {
          profile[k] = a;
          profile[j] = bq;
          mat[a][bq] = game.utility(k, profile);
        }
      ZeroSumSolution sol = solve_zero_sum(mat);
      out.values[k] = sol.value;
      out.punishments[k] = {sol.col_strategy};
    } else {
      // alternating descent over the opponents' product profile
      std::vector<std::vector<double>> mixed(K);
      for (int p = 0; p < K; ++p)
        mixed[p].assign(game.action_count(p),
                        1.0 / game.action_count(p));
      double value = best_response_value(game, k, mixed);
      for (int round = 0; round < 200; ++round) {
        double before = value;
        for (int j = 0; j < K; ++j) {
          if (j == k) continue;
          auto mat = response_matrix(game, k, j, mixed);
          ZeroSumSolution sol = solve_zero_sum(mat);
          mixed[j] = sol.col_strategy;
          value = best_response_value(game, k, mixed);
        }
        if (before - value < 1e-12) break;
      }
      out.values[k] = value;
      for (int j = 0; j < K; ++j)
        if (j != k) out.punishments[k].push_back(mixed[j]);
    }
  }
  return out;
}

std::vector<std::vector<double>> punishment_profile(const MinmaxLevels& levels,
                                                    int player) {
  return levels.punishments.at(player);
}

bool is_individually_rational(std::span<const double> utilities,
                              std::span<const double> levels) {
  if (utilities.size() != levels.size())
    throw std::invalid_argument("length mismatch");
  for (size_t k = 0; k < utilities.size(); ++k)
    if (utilities[k] < levels[k] - 1e-9) return false;
  return true;
}

}  // namespace relaymon
