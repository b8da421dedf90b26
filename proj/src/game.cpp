#include "relaymon/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relaymon/prob.hpp"

namespace relaymon {

StageGame::StageGame(std::vector<std::vector<std::string>> action_labels,
                     std::vector<std::vector<double>> utilities)
    : actions_(std::move(action_labels)), util_(std::move(utilities)) {
  if (actions_.size() < 2) throw ValidationError("K >= 2 required");
  profile_count_ = 1;
  for (size_t k = 0; k < actions_.size(); ++k) {
    if (actions_[k].empty())
      throw ValidationError("player " + std::to_string(k + 1) +
                            " has no actions");
    std::set<std::string> seen(actions_[k].begin(), actions_[k].end());
    if (seen.size() != actions_[k].size())
      throw ValidationError("duplicate action label for player " +
                            std::to_string(k + 1));
    profile_count_ *= actions_[k].size();
  }
  if (util_.size() != actions_.size())
    throw ValidationError("utilities must list one table per player");
  max_abs_util_ = 0.0;
  for (size_t k = 0; k < util_.size(); ++k) {
    if (util_[k].size() != profile_count_)
      throw ValidationError("utility table for player " +
                            std::to_string(k + 1) + " has " +
                            std::to_string(util_[k].size()) + " entries, want " +
                            std::to_string(profile_count_));
    for (double u : util_[k]) {
      if (!std::isfinite(u)) throw ValidationError("non-finite utility");
      max_abs_util_ = std::max(max_abs_util_, std::abs(u));
    }
  }
}

int StageGame::action_index(int player, const std::string& label) const {
  const auto& labels = actions_.at(player);
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end())
    throw ValidationError("unknown action '" + label + "' for player " +
                          std::to_string(player + 1));
  return static_cast<int>(it - labels.begin());
}

size_t StageGame::profile_index(std::span<const int> profile) const {
  size_t flat = 0;
  for (int k = 0; k < player_count(); ++k)
    flat = flat * actions_[k].size() + static_cast<size_t>(profile[k]);
  return flat;
}

void StageGame::profile_unpack(size_t flat, std::span<int> profile) const {
  for (int k = player_count() - 1; k >= 0; --k) {
    profile[k] = static_cast<int>(flat % actions_[k].size());
    flat /= actions_[k].size();
  }
}

MonitoringStructure::MonitoringStructure(
    std::vector<std::vector<std::string>> signal_labels,
    std::vector<std::vector<double>> joint_rows, int public_alphabet_size)
    : signals_(std::move(signal_labels)),
      rows_(std::move(joint_rows)),
      public_size_(public_alphabet_size) {
  if (public_size_ < 1) throw ValidationError("|S_0| >= 1 required");
  signal_profile_count_ = 1;
  for (size_t k = 0; k < signals_.size(); ++k) {
    if (signals_[k].empty())
      throw ValidationError("player " + std::to_string(k + 1) +
                            " has no signals");
    std::set<std::string> seen(signals_[k].begin(), signals_[k].end());
    if (seen.size() != signals_[k].size())
      throw ValidationError("duplicate signal label for player " +
                            std::to_string(k + 1));
    signal_profile_count_ *= signals_[k].size();
  }
  for (size_t a = 0; a < rows_.size(); ++a) {
    if (rows_[a].size() != signal_profile_count_)
      throw ValidationError("monitoring row " + std::to_string(a) +
                            " has wrong width");
    double sum = 0.0;
    for (double p : rows_[a]) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ValidationError("monitoring row " + std::to_string(a) +
                              " has a negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw ValidationError("monitoring row " + std::to_string(a) +
                            " not stochastic (sums to " + std::to_string(sum) +
                            ")");
  }
}

MonitoringStructure MonitoringStructure::binary_symmetric(
    double delta, int public_alphabet_size) {
  if (delta < 0.0 || delta > 1.0)
    throw ValidationError("delta must lie in [0,1]");
  double good = 1.0 - delta / 2.0;
  double bad = delta / 2.0;
  // s_1 mirrors a_2, s_2 mirrors a_1; independent given the profile.
  std::vector<std::vector<double>> rows;
  rows.reserve(4);
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      std::vector<double> row(4, 0.0);
      for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
          double p1 = (s1 == a2) ? good : bad;
          double p2 = (s2 == a1) ? good : bad;
          row[s1 * 2 + s2] = p1 * p2;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return MonitoringStructure({{"s1", "s1'"}, {"s2", "s2'"}}, std::move(rows),
                             public_alphabet_size);
}

size_t MonitoringStructure::signal_profile_index(
    std::span<const int> signals) const {
  size_t flat = 0;
  for (int k = 0; k < player_count(); ++k)
    flat = flat * signals_[k].size() + static_cast<size_t>(signals[k]);
  return flat;
}

void MonitoringStructure::signal_profile_unpack(size_t flat,
                                                std::span<int> signals) const {
  for (int k = player_count() - 1; k >= 0; --k) {
    signals[k] = static_cast<int>(flat % signals_[k].size());
    flat /= signals_[k].size();
  }
}

double MonitoringStructure::marginal(int player, size_t action_profile,
                                     int signal) const {
  const auto& row = rows_[action_profile];
  double sum = 0.0;
  std::vector<int> sig(player_count());
  for (size_t s = 0; s < signal_profile_count_; ++s) {
    if (row[s] == 0.0) continue;
    signal_profile_unpack(s, sig);
    if (sig[player] == signal) sum += row[s];
  }
  return sum;
}

std::vector<std::vector<double>> MonitoringStructure::signal_channel(
    int player) const {
  std::vector<std::vector<double>> table(rows_.size());
  for (size_t a = 0; a < rows_.size(); ++a) {
    table[a].assign(signal_count(player), 0.0);
    std::vector<int> sig(player_count());
    for (size_t s = 0; s < signal_profile_count_; ++s) {
      if (rows_[a][s] == 0.0) continue;
      signal_profile_unpack(s, sig);
      table[a][sig[player]] += rows_[a][s];
    }
  }
  return table;
}

ProductDistribution::ProductDistribution(
    std::vector<std::vector<double>> per_player)
    : probs_(std::move(per_player)) {
  for (size_t k = 0; k < probs_.size(); ++k) {
    if (!is_simplex(probs_[k]))
      throw ValidationError("mixed action of player " + std::to_string(k + 1) +
                            " is not a probability vector");
  }
}

double ProductDistribution::profile_prob(std::span<const int> profile) const {
  double p = 1.0;
  for (size_t k = 0; k < probs_.size(); ++k) p *= probs_[k][profile[k]];
  return p;
}

std::vector<std::vector<int>> ProductDistribution::support_excluding(
    int excluded, double cutoff) const {
  std::vector<std::vector<int>> support;
  for (int k = 0; k < player_count(); ++k) {
    if (k == excluded) continue;
    std::vector<int> sup;
    for (size_t a = 0; a < probs_[k].size(); ++a)
      if (probs_[k][a] > cutoff) sup.push_back(static_cast<int>(a));
    support.push_back(std::move(sup));
  }
  return support;
}

DeviationSpec DeviationSpec::none() { return DeviationSpec{}; }

DeviationSpec DeviationSpec::iid(int player, std::vector<double> dist) {
  if (!is_simplex(dist))
    throw ValidationError("deviation distribution is not a simplex point");
  DeviationSpec d;
  d.kind_ = Kind::Iid;
  d.player_ = player;
  d.dist_ = std::move(dist);
  return d;
}

DeviationSpec DeviationSpec::constant(int player, int action) {
  DeviationSpec d;
  d.kind_ = Kind::Constant;
  d.player_ = player;
  d.actions_ = {action};
  return d;
}

DeviationSpec DeviationSpec::periodic(int player, std::vector<int> actions) {
  if (actions.empty()) throw ValidationError("periodic deviation: empty cycle");
  DeviationSpec d;
  d.kind_ = Kind::Periodic;
  d.player_ = player;
  d.actions_ = std::move(actions);
  return d;
}

DeviationSpec DeviationSpec::scripted(int player, std::vector<int> actions) {
  if (actions.empty()) throw ValidationError("scripted deviation: empty script");
  DeviationSpec d;
  d.kind_ = Kind::Scripted;
  d.player_ = player;
  d.actions_ = std::move(actions);
  return d;
}

int DeviationSpec::sample(uint64_t stage, Rng& rng) const {
  switch (kind_) {
    case Kind::Iid:
      return rng.categorical(dist_);
    case Kind::Constant:
      return actions_[0];
    case Kind::Periodic:
    case Kind::Scripted:
      return actions_[stage % actions_.size()];
    case Kind::None:
      break;
  }
  throw std::logic_error("sample() on inactive deviation");
}

std::vector<double> DeviationSpec::stage_distribution(uint64_t stage,
                                                      int action_count) const {
  std::vector<double> d(action_count, 0.0);
  if (kind_ == Kind::Iid) return dist_;
  d[actions_[stage % actions_.size()]] = 1.0;
  return d;
}

std::string DeviationSpec::describe() const {
  switch (kind_) {
    case Kind::None:
      return "none";
    case Kind::Iid: {
      std::string s = "iid:player=" + std::to_string(player_ + 1) + ",probs=";
      for (size_t j = 0; j < dist_.size(); ++j)
        s += (j ? "," : "") + std::to_string(dist_[j]);
      return s;
    }
    case Kind::Constant:
      return "constant:player=" + std::to_string(player_ + 1) +
             ",action=" + std::to_string(actions_[0]);
    case Kind::Periodic:
    case Kind::Scripted: {
      std::string s = (kind_ == Kind::Periodic ? "periodic" : "script");
      s += ":player=" + std::to_string(player_ + 1) + ",actions=";
      for (size_t j = 0; j < actions_.size(); ++j)
        s += (j ? "," : "") + std::to_string(actions_[j]);
      return s;
    }
  }
  return "?";
}

void validate_pair(const StageGame& game, const MonitoringStructure& m) {
  if (m.player_count() != game.player_count())
    throw ValidationError("monitoring structure covers " +
                          std::to_string(m.player_count()) + " players, game has " +
                          std::to_string(game.player_count()));
  // One row per action profile.
  std::vector<int> probe(game.player_count(), 0);
  size_t rows = game.profile_count();
  for (size_t a = 0; a < rows; ++a) (void)m.row(a);
}

std::vector<double> expected_utility(const StageGame& game,
                                     const ProductDistribution& pstar) {
  if (pstar.player_count() != game.player_count())
    throw ValidationError("mixed profile has wrong player count");
  std::vector<double> u(game.player_count(), 0.0);
  std::vector<int> profile(game.player_count());
  for (size_t flat = 0; flat < game.profile_count(); ++flat) {
    game.profile_unpack(flat, profile);
    double p = pstar.profile_prob(profile);
    if (p == 0.0) continue;
    for (int k = 0; k < game.player_count(); ++k)
      u[k] += p * game.utility_flat(k, flat);
  }
  return u;
}

std::vector<int> sample_profile(const StageGame& game,
                                const ProductDistribution& pstar,
                                const DeviationSpec& dev, uint64_t stage,
                                Rng& rng) {
  std::vector<int> profile(game.player_count());
  for (int k = 0; k < game.player_count(); ++k) {
    if (dev.active() && dev.player() == k)
      profile[k] = dev.sample(stage, rng);
    else
      profile[k] = rng.categorical(pstar.player(k));
  }
  return profile;
}

std::vector<int> sample_signals(const MonitoringStructure& m,
                                size_t action_profile, Rng& rng) {
  int s = rng.categorical(m.row(action_profile));
  std::vector<int> sig(m.player_count());
  m.signal_profile_unpack(static_cast<size_t>(s), sig);
  return sig;
}

}  // namespace relaymon
