#ifndef RELAYMON_GAME_HPP
#define RELAYMON_GAME_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaymon/rng.hpp"

namespace relaymon {

/// Raised by validation with a human-readable reason.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite stage game: K players, per-player action labels, payoff tensor.
/// Action and signal indices follow the declaration (file) order of labels;
/// all lookups are positional from then on.
class StageGame {
 public:
  StageGame(std::vector<std::vector<std::string>> action_labels,
            std::vector<std::vector<double>> utilities);

  int player_count() const { return static_cast<int>(actions_.size()); }
  int action_count(int player) const {
    return static_cast<int>(actions_.at(player).size());
  }
  const std::vector<std::string>& action_labels(int player) const {
    return actions_.at(player);
  }
  int action_index(int player, const std::string& label) const;

  /// Number of action profiles, ∏_k |A_k|.
  size_t profile_count() const { return profile_count_; }

  /// Profile index is row-major with player K-1 fastest.
  size_t profile_index(std::span<const int> profile) const;
  void profile_unpack(size_t flat, std::span<int> profile) const;

  double utility(int player, std::span<const int> profile) const {
    return util_[player][profile_index(profile)];
  }
  double utility_flat(int player, size_t profile) const {
    return util_[player][profile];
  }

  double max_abs_utility() const { return max_abs_util_; }

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<double>> util_;  // [player][profile]
  size_t profile_count_;
  double max_abs_util_;
};

/// Conditional probability of a private-signal profile given an action
/// profile, plus the public alphabet size. Rows (fixed action profile)
/// are probability distributions over signal profiles.
class MonitoringStructure {
 public:
  MonitoringStructure(std::vector<std::vector<std::string>> signal_labels,
                      std::vector<std::vector<double>> joint_rows,
                      int public_alphabet_size);

  /// Binary-action two-player family: player k's signal reflects the
  /// opponent's action, flipped with probability delta/2, the two signals
  /// independent given actions. delta=0 is noiseless, delta=1 carries
  /// no information.
  static MonitoringStructure binary_symmetric(double delta,
                                              int public_alphabet_size);

  int player_count() const { return static_cast<int>(signals_.size()); }
  int signal_count(int player) const {
    return static_cast<int>(signals_.at(player).size());
  }
  const std::vector<std::string>& signal_labels(int player) const {
    return signals_.at(player);
  }
  int public_alphabet_size() const { return public_size_; }

  size_t signal_profile_count() const { return signal_profile_count_; }
  size_t signal_profile_index(std::span<const int> signals) const;
  void signal_profile_unpack(size_t flat, std::span<int> signals) const;

  /// P(signal profile | action profile), both flat indices.
  double joint(size_t action_profile, size_t signal_profile) const {
    return rows_[action_profile][signal_profile];
  }
  const std::vector<double>& row(size_t action_profile) const {
    return rows_[action_profile];
  }

  /// Marginal P(s_k | action profile): sums the joint over the other
  /// players' signals.
  double marginal(int player, size_t action_profile, int signal) const;

  /// Full per-player channel: [action profile][s_k].
  std::vector<std::vector<double>> signal_channel(int player) const;

 private:
  std::vector<std::vector<std::string>> signals_;
  std::vector<std::vector<double>> rows_;  // [action profile][signal profile]
  int public_size_;
  size_t signal_profile_count_;
};

/// One mixed action per player; the product carries no correlation.
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<std::vector<double>> per_player);

  int player_count() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& player(int k) const { return probs_.at(k); }

  double prob(int player, int action) const { return probs_[player][action]; }

  /// P(profile) = ∏_k P_k(a_k).
  double profile_prob(std::span<const int> profile) const;

  /// Support of the product over all players except `excluded`
  /// (actions with probability > cutoff).
  std::vector<std::vector<int>> support_excluding(int excluded,
                                                  double cutoff) const;

 private:
  std::vector<std::vector<double>> probs_;
};

/// Per-stage action generator for a single (possible) deviator.
/// Stateless in the RNG: the distribution for stage t is a pure function
/// of t, so replays are reproducible.
class DeviationSpec {
 public:
  enum class Kind { None, Iid, Constant, Periodic, Scripted };

  static DeviationSpec none();
  static DeviationSpec iid(int player, std::vector<double> dist);
  static DeviationSpec constant(int player, int action);
  static DeviationSpec periodic(int player, std::vector<int> actions);
  static DeviationSpec scripted(int player, std::vector<int> actions);

  Kind kind() const { return kind_; }
  bool active() const { return kind_ != Kind::None; }
  int player() const { return player_; }

  /// Action for stage t (0-based). Scripted sequences repeat cyclically
  /// past their end.
  int sample(uint64_t stage, Rng& rng) const;

  /// Distribution generated at stage t; degenerate for action modes.
  std::vector<double> stage_distribution(uint64_t stage,
                                         int action_count) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::None;
  int player_ = -1;
  std::vector<double> dist_;
  std::vector<int> actions_;
};

/// Cross-checks a game against a monitoring structure and validates both.
void validate_pair(const StageGame& game, const MonitoringStructure& m);

/// E_P[u_k] for every player, by exact summation over profiles.
std::vector<double> expected_utility(const StageGame& game,
                                     const ProductDistribution& pstar);

/// Draw one stage: honest players sample their mixed action, the deviator
/// (if any) follows its generator.
std::vector<int> sample_profile(const StageGame& game,
                                const ProductDistribution& pstar,
                                const DeviationSpec& dev, uint64_t stage,
                                Rng& rng);

/// Draw the signal profile for a played action profile.
std::vector<int> sample_signals(const MonitoringStructure& m,
                                size_t action_profile, Rng& rng);

}  // namespace relaymon

#endif
