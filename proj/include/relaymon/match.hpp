#ifndef RELAYMON_MATCH_HPP
#define RELAYMON_MATCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "relaymon/codec.hpp"
#include "relaymon/game.hpp"
#include "relaymon/minmax.hpp"

namespace relaymon {

/// Deviation injected into a match: the player abandons the prescribed
/// randomization from `start_block` (1-based) on. `typical_shuffle` plays,
/// each block, a random permutation of an exactly-on-type sequence - the
/// statistically invisible deviation.
struct MatchDeviation {
  DeviationSpec per_stage;  // stage generator, stage index counts from the start block
  bool typical_shuffle = false;
  int shuffle_player = -1;
  int start_block = 3;

  bool active() const { return typical_shuffle || per_stage.active(); }
  int player() const {
    return typical_shuffle ? shuffle_player : per_stage.player();
  }
  std::string describe() const;

  static MatchDeviation none() { return {}; }
  static MatchDeviation stages(DeviationSpec spec, int start_block = 3);
  static MatchDeviation shuffled_typical(int player, int start_block = 3);
};

struct SimConfig {
  int block_length = 0;      // n
  int blocks = 0;            // B >= 3
  double eps_code = 0.05;    // codec typicality parameter
  double eps_test = 0.05;    // block statistical-test radius
  double eps_eq = 0.1;       // equilibrium tolerance
  uint64_t seed = 1;
  MatchDeviation deviation;
  // A failed block decode flags the decoded player as deviating when set.
  // Off by default: at finite block lengths codec failures are dominated
  // by pre-asymptotic artifacts, not deviations (see README).
  bool flag_decode_failure = false;

  void validate() const;
};

struct BlockRecord {
  ActionBlock actions;
  SignalBlock signals;
  std::vector<int> public_wire;  // all zero on block 1 and on encoder error
  bool encoder_error = false;
  // what each player decoded and tested AT this block; the content always
  // concerns the block two steps back (the pipeline delay)
  std::vector<int> decode_status;       // per decoder; -1 = not attempted
  std::vector<ActionBlock> decoded;     // per decoder; empty unless decoded
  // test_events[k][i]: 1 = player k flagged player i, 0 = tested negative,
  // -1 = not tested
  std::vector<std::vector<int>> test_events;
  std::vector<int> punishing;  // per player: target during this block, -1 main plan
  std::vector<double> mean_utility;
};

struct MatchTrace {
  int block_length = 0;
  int blocks = 0;
  std::vector<BlockRecord> block;
  std::vector<double> avg_utility;   // realized per-player mean over all stages
  bool any_flag = false;             // some statistical test fired
  int first_flag_block = -1;         // block at which a test first fired
  int first_flagged_source = -1;     // the block whose content fired it
  int deviation_start_block = -1;

  std::string blocks_csv() const;
};

/// Statistical block test: 1 means the decoded sequence is not
/// eps-typical for the prescribed mixed action (deviation declared).
int statistical_block_test(const std::vector<int>& decoded_actions,
                           const std::vector<double>& prescribed, double eps);

/// Runs one match of the encoder-assisted protocol: i.i.d. play of pstar,
/// blockwise relay of the previous block over the public wire, delayed
/// statistical tests, absorbing punishment at the min-max profile.
MatchTrace run_match(const StageGame& game, const MonitoringStructure& m,
                     const ProductDistribution& pstar, const SimConfig& config);

struct MatchSummary {
  std::vector<double> avg_utility;
  bool any_flag = false;
  int first_flag_block = -1;
  int first_flagged_source = -1;
};

std::vector<MatchSummary> run_matches(const StageGame& game,
                                      const MonitoringStructure& m,
                                      const ProductDistribution& pstar,
                                      const SimConfig& config, int matches,
                                      int jobs = 0);

/// Serial reference for run_matches (identical output).
std::vector<MatchSummary> run_matches_serial(const StageGame& game,
                                             const MonitoringStructure& m,
                                             const ProductDistribution& pstar,
                                             const SimConfig& config,
                                             int matches);

struct DeviationOutcome {
  std::string description;
  double deviator_mean = 0.0;
  double gain = 0.0;          // deviator mean - honest mean
  double gain_ci_half = 0.0;  // 95% normal halfwidth on the gain
  double detection_rate = 0.0;  // matches with any test fired
};

struct EquilibriumReport {
  std::vector<double> honest_utility;      // per player, match means
  std::vector<double> target_utility;      // E_pstar[u]
  std::vector<double> distance_to_target;  // |honest - target|
  std::vector<DeviationOutcome> deviations;
  double max_gain = 0.0;
  double eps_eq = 0.0;
  bool pass = false;

  std::string to_text() const;
};

/// Monte Carlo check of the no-profitable-deviation condition over a
/// deviation library; empty library is rejected.
EquilibriumReport equilibrium_check(const StageGame& game,
                                    const MonitoringStructure& m,
                                    const ProductDistribution& pstar,
                                    const SimConfig& config,
                                    const std::vector<MatchDeviation>& library,
                                    int matches, int jobs = 0);

/// Canonical library: constant action, i.i.d. off-type, shuffled typical.
std::vector<MatchDeviation> default_deviation_library(const StageGame& game,
                                                      int player);

}  // namespace relaymon

#endif
