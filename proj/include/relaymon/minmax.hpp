#ifndef RELAYMON_MINMAX_HPP
#define RELAYMON_MINMAX_HPP

#include <span>
#include <vector>

#include "relaymon/game.hpp"

namespace relaymon {

/// Value and optimal mixed strategies of the matrix game where the row
/// player maximizes payoff[r][c] and the column player minimizes it.
struct ZeroSumSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

/// Dense simplex with Bland's rule; exact up to floating point for the
/// small matrices in scope.
ZeroSumSolution solve_zero_sum(const std::vector<std::vector<double>>& payoff);

/// Punishment levels: what player k can be held to by independent
/// opponents, and the opponents' argmin profile.
struct MinmaxLevels {
  std::vector<double> values;  // per player
  // punishments[i][j] is the mixed action of opponent j (j-th player != i)
  // when the table targets player i; player order ascending.
  std::vector<std::vector<std::vector<double>>> punishments;
  bool exact = true;  // false for K >= 3 (alternating-minimization estimate)
};

/// Exact for two players (zero-sum LP). For K >= 3 the minimization over
/// product profiles is non-convex; an alternating best-response descent is
/// used and the result flagged approximate.
MinmaxLevels minmax_levels(const StageGame& game);

/// Mixed profile of player i's opponents that holds i to its level.
/// Players in ascending order, i skipped.
std::vector<std::vector<double>> punishment_profile(const MinmaxLevels& levels,
                                                    int player);

/// u_k >= level_k for every k, boundary included (tolerance 1e-9).
bool is_individually_rational(std::span<const double> utilities,
                              std::span<const double> levels);

}  // namespace relaymon

#endif
