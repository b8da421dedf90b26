#include "relaymon/match.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "relaymon/typicality.hpp"

namespace relaymon {

std::string MatchDeviation::describe() const {
  if (!active()) return "none";
  std::string s = typical_shuffle
                      ? "shuffled_typical:player=" +
                            std::to_string(shuffle_player + 1)
                      : per_stage.describe();
  return s + ",from_block=" + std::to_string(start_block);
}

MatchDeviation MatchDeviation::stages(DeviationSpec spec, int start_block) {
  MatchDeviation d;
  d.per_stage = std::move(spec);
  d.start_block = start_block;
  return d;
}

MatchDeviation MatchDeviation::shuffled_typical(int player, int start_block) {
  MatchDeviation d;
  d.typical_shuffle = true;
  d.shuffle_player = player;
  d.start_block = start_block;
  return d;
}

void SimConfig::validate() const {
  if (block_length < 1) throw ValidationError("block length must be >= 1");
  if (blocks < 3)
    throw ValidationError("need at least 3 blocks (two warm-up + play)");
  if (eps_code <= 0.0 || eps_test <= 0.0 || eps_eq <= 0.0)
    throw ValidationError("tolerances must be positive");
  if (deviation.active() && deviation.start_block < 1)
    throw ValidationError("deviation start block must be >= 1");
}

int statistical_block_test(const std::vector<int>& decoded_actions,
                           const std::vector<double>& prescribed, double eps) {
  return is_typical(decoded_actions, prescribed, eps) ? 0 : 1;
}

namespace {

// Exactly-on-type block: counts by largest remainder, then shuffled.
std::vector<int> shuffled_typical_block(const std::vector<double>& dist, int n,
                                        Rng& rng) {
  const int A = static_cast<int>(dist.size());
  std::vector<int> counts(A, 0);
  std::vector<std::pair<double, int>> frac(A);
  int assigned = 0;
  for (int a = 0; a < A; ++a) {
    double want = dist[a] * n;
    counts[a] = static_cast<int>(std::floor(want));
    assigned += counts[a];
    frac[a] = {want - counts[a], a};
  }
  std::sort(frac.begin(), frac.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (int r = 0; r < n - assigned; ++r) counts[frac[r % A].second]++;

  std::vector<int> seq;
  seq.reserve(n);
  for (int a = 0; a < A; ++a) seq.insert(seq.end(), counts[a], a);
  for (int t = n - 1; t > 0; --t) {
    int j = static_cast<int>(rng.uniform01() * (t + 1));
    std::swap(seq[t], seq[j]);
  }
  return seq;
}

// The mixed action player k uses while punishing target i; the punishment
// table lists opponents in ascending player order with the target skipped.
const std::vector<double>& punish_action(const MinmaxLevels& levels, int i,
                                         int k) {
  int slot = k < i ? k : k - 1;
  return levels.punishments[i][slot];
}

}  // namespace

MatchTrace run_match(const StageGame& game, const MonitoringStructure& m,
                     const ProductDistribution& pstar,
                     const SimConfig& config) {
  config.validate();
  const int K = game.player_count();
  const int n = config.block_length;
  const int B = config.blocks;

  Codebook code = build_code(game, m, pstar, n, config.eps_code, config.seed);
  MinmaxLevels levels = minmax_levels(game);
  Rng rng(derive_seed(config.seed, 0x6d61746368ull));

  MatchTrace trace;
  trace.block_length = n;
  trace.blocks = B;
  trace.block.resize(B);
  trace.deviation_start_block =
      config.deviation.active() ? config.deviation.start_block : -1;

  std::vector<int> punishing(K, -1);
  const MatchDeviation& dev = config.deviation;

  for (int b = 1; b <= B; ++b) {
    BlockRecord& rec = trace.block[b - 1];
    rec.decode_status.assign(K, -1);
    rec.decoded.assign(K, {});
    rec.test_events.assign(K, std::vector<int>(K, -1));
    rec.mean_utility.assign(K, 0.0);

    // public wire transmitted during block b: the previous block's actions
    if (b == 1) {
      rec.public_wire.assign(n, 0);
    } else {
      EncodedMessage msg = encode(code, trace.block[b - 2].actions);
      if (msg.status == EncodeStatus::Ok) {
        rec.public_wire = msg.rendered;
      } else {
        rec.public_wire.assign(n, 0);
        rec.encoder_error = true;
      }
    }

    // decode block b-2 from the wire seen during block b-1, then test
    if (b >= 3) {
      const BlockRecord& source = trace.block[b - 3];  // block b-2
      const BlockRecord& carrier = trace.block[b - 2]; // its wire, block b-1
      for (int k = 0; k < K; ++k) {
        std::vector<int> own_sig(n), own_act(n);
        for (int t = 0; t < n; ++t) {
          own_sig[t] = source.signals[t][k];
          own_act[t] = source.actions[t][k];
        }
        DecodeResult dr =
            decode(code, k, carrier.public_wire, own_sig, own_act);
        rec.decode_status[k] = static_cast<int>(dr.status);
        if (dr.status == DecodeStatus::Ok) {
          rec.decoded[k] = dr.actions;
          for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            std::vector<int> decoded_i(n);
            for (int t = 0; t < n; ++t) decoded_i[t] = dr.actions[t][i];
            rec.test_events[k][i] = statistical_block_test(
                decoded_i, pstar.player(i), config.eps_test);
          }
        } else if (config.flag_decode_failure) {
          // conservative reading: an undecodable block counts as a
          // deviation by the first other player
          for (int i = 0; i < K; ++i)
            if (i != k) {
              rec.test_events[k][i] = 1;
              break;
            }
        }
        for (int i = 0; i < K; ++i) {
          if (rec.test_events[k][i] == 1) {
            if (!trace.any_flag) {
              trace.any_flag = true;
              trace.first_flag_block = b;
              trace.first_flagged_source = b - 2;
            }
            if (punishing[k] < 0) punishing[k] = i;
            break;  // lowest flagged index punished
          }
        }
      }
    }

    // play the block
    rec.actions.assign(n, std::vector<int>(K));
    rec.signals.assign(n, std::vector<int>(K));
    rec.punishing = punishing;

    std::vector<int> shuffle_block;
    bool dev_here = dev.active() && b >= dev.start_block;
    if (dev_here && dev.typical_shuffle)
      shuffle_block = shuffled_typical_block(pstar.player(dev.player()), n, rng);

    for (int t = 0; t < n; ++t) {
      for (int k = 0; k < K; ++k) {
        if (dev_here && dev.player() == k) {
          if (dev.typical_shuffle) {
            rec.actions[t][k] = shuffle_block[t];
          } else {
            uint64_t dev_stage =
                static_cast<uint64_t>(b - dev.start_block) * n + t;
            rec.actions[t][k] = dev.per_stage.sample(dev_stage, rng);
          }
        } else if (punishing[k] >= 0) {
          rec.actions[t][k] =
              rng.categorical(punish_action(levels, punishing[k], k));
        } else {
          rec.actions[t][k] = rng.categorical(pstar.player(k));
        }
      }
      rec.signals[t] =
          sample_signals(m, game.profile_index(rec.actions[t]), rng);
      for (int k = 0; k < K; ++k)
        rec.mean_utility[k] += game.utility(k, rec.actions[t]);
    }
    for (int k = 0; k < K; ++k) rec.mean_utility[k] /= n;
  }

  trace.avg_utility.assign(K, 0.0);
  for (const BlockRecord& rec : trace.block)
    for (int k = 0; k < K; ++k) trace.avg_utility[k] += rec.mean_utility[k];
  for (int k = 0; k < K; ++k) trace.avg_utility[k] /= B;
  return trace;
}

std::string MatchTrace::blocks_csv() const {
  const int K = block.empty() ? 0 : static_cast<int>(block[0].mean_utility.size());
  std::ostringstream os;
  os << "block,encoder_error";
  for (int k = 0; k < K; ++k) os << ",decode_p" << k + 1;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < K; ++i)
      if (i != k) os << ",test_p" << k + 1 << "_on_p" << i + 1;
  for (int k = 0; k < K; ++k) os << ",punishing_p" << k + 1;
  for (int k = 0; k < K; ++k) os << ",mean_u" << k + 1;
  os << "\n";
  char buf[64];
  for (size_t b = 0; b < block.size(); ++b) {
    const BlockRecord& r = block[b];
    os << b + 1 << "," << (r.encoder_error ? 1 : 0);
    for (int k = 0; k < K; ++k) os << "," << r.decode_status[k];
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < K; ++i)
        if (i != k) os << "," << r.test_events[k][i];
    for (int k = 0; k < K; ++k) os << "," << r.punishing[k] + 1;
    for (int k = 0; k < K; ++k) {
      snprintf(buf, sizeof buf, "%.17g", r.mean_utility[k]);
      os << "," << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::vector<MatchSummary> run_matches_serial(const StageGame& game,
                                             const MonitoringStructure& m,
                                             const ProductDistribution& pstar,
                                             const SimConfig& config,
                                             int matches) {
  std::vector<MatchSummary> out(matches);
  for (int j = 0; j < matches; ++j) {
    SimConfig c = config;
    c.seed = derive_seed(config.seed, static_cast<uint64_t>(j));
    MatchTrace t = run_match(game, m, pstar, c);
    out[j] = {t.avg_utility, t.any_flag, t.first_flag_block,
              t.first_flagged_source};
  }
  return out;
}

std::vector<MatchSummary> run_matches(const StageGame& game,
                                      const MonitoringStructure& m,
                                      const ProductDistribution& pstar,
                                      const SimConfig& config, int matches,
                                      int jobs) {
  std::vector<MatchSummary> out(matches);
#pragma omp parallel for schedule(dynamic) num_threads( \
    jobs > 0 ? jobs : omp_get_max_threads())
  for (int j = 0; j < matches; ++j) {
    SimConfig c = config;
    c.seed = derive_seed(config.seed, static_cast<uint64_t>(j));
    MatchTrace t = run_match(game, m, pstar, c);
    out[j] = {t.avg_utility, t.any_flag, t.first_flag_block,
              t.first_flagged_source};
  }
  return out;
}

std::string EquilibriumReport::to_text() const {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  os << "honest utility:";
  for (double u : honest_utility) os << " " << u;
  os << "\ntarget utility:";
  for (double u : target_utility) os << " " << u;
  os << "\ndistance:";
  for (double d : distance_to_target) os << " " << d;
  os << "\n";
  for (const auto& d : deviations) {
    os << "deviation " << d.description << ": mean " << d.deviator_mean
       << " gain " << d.gain << " +- " << d.gain_ci_half << " detection "
       << d.detection_rate << "\n";
  }
  os << "max gain " << max_gain << " vs eps_eq " << eps_eq << " => "
     << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

EquilibriumReport equilibrium_check(const StageGame& game,
                                    const MonitoringStructure& m,
                                    const ProductDistribution& pstar,
                                    const SimConfig& config,
                                    const std::vector<MatchDeviation>& library,
                                    int matches, int jobs) {
  if (library.empty())
    throw ValidationError("equilibrium check needs a nonempty deviation library");
  if (matches < 2) throw ValidationError("need at least 2 matches");
  const int K = game.player_count();

  SimConfig honest = config;
  honest.deviation = MatchDeviation::none();
  auto base = run_matches(game, m, pstar, honest, matches, jobs);

  EquilibriumReport rep;
  rep.eps_eq = config.eps_eq;
  rep.honest_utility.assign(K, 0.0);
  for (const auto& s : base)
    for (int k = 0; k < K; ++k) rep.honest_utility[k] += s.avg_utility[k];
  for (int k = 0; k < K; ++k) rep.honest_utility[k] /= matches;
  rep.target_utility = expected_utility(game, pstar);
  rep.distance_to_target.assign(K, 0.0);
  for (int k = 0; k < K; ++k)
    rep.distance_to_target[k] =
        std::abs(rep.honest_utility[k] - rep.target_utility[k]);

  auto variance = [](const std::vector<double>& xs, double mean) {
    double v = 0.0;
    for (double x : xs) v += (x - mean) * (x - mean);
    return xs.size() > 1 ? v / (xs.size() - 1) : 0.0;
  };

  rep.max_gain = -1e300;
  double binding_ci = 0.0;
  for (const MatchDeviation& dev : library) {
    const int who = dev.player();
    SimConfig c = config;
    c.deviation = dev;
    // decorrelate deviation runs from the honest baseline
    c.seed = derive_seed(config.seed, 0xdeull + static_cast<uint64_t>(
                                                    &dev - library.data()));
    auto runs = run_matches(game, m, pstar, c, matches, jobs);

    DeviationOutcome out;
    out.description = dev.describe();
    std::vector<double> dev_utils(matches), base_utils(matches);
    int detected = 0;
    for (int j = 0; j < matches; ++j) {
      dev_utils[j] = runs[j].avg_utility[who];
      base_utils[j] = base[j].avg_utility[who];
      detected += runs[j].any_flag ? 1 : 0;
    }
    out.deviator_mean =
        std::accumulate(dev_utils.begin(), dev_utils.end(), 0.0) / matches;
    out.detection_rate = double(detected) / matches;
    out.gain = out.deviator_mean - rep.honest_utility[who];
    double var_d = variance(dev_utils, out.deviator_mean);
    double var_h = variance(base_utils, rep.honest_utility[who]);
    out.gain_ci_half = 1.959963984540054 * std::sqrt((var_d + var_h) / matches);
    if (out.gain > rep.max_gain) {
      rep.max_gain = out.gain;
      binding_ci = out.gain_ci_half;
    }
    rep.deviations.push_back(std::move(out));
  }
  rep.pass = rep.max_gain <= rep.eps_eq + binding_ci;
  return rep;
}

std::vector<MatchDeviation> default_deviation_library(const StageGame& game,
                                                      int player) {
  std::vector<MatchDeviation> lib;
  for (int a = 0; a < game.action_count(player); ++a)
    lib.push_back(MatchDeviation::stages(DeviationSpec::constant(player, a)));
  std::vector<double> uniform(game.action_count(player),
                              1.0 / game.action_count(player));
  lib.push_back(MatchDeviation::stages(DeviationSpec::iid(player, uniform)));
  lib.push_back(MatchDeviation::shuffled_typical(player));
  return lib;
}

}  // namespace relaymon
