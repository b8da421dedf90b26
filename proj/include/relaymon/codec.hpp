#ifndef RELAYMON_CODEC_HPP
#define RELAYMON_CODEC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaymon/game.hpp"
#include "relaymon/graph.hpp"
#include "relaymon/info.hpp"

namespace relaymon {

/// actions[stage][player]
using ActionBlock = std::vector<std::vector<int>>;
/// signals[stage][player]
using SignalBlock = std::vector<std::vector<int>>;

struct SuspectScore {
  int suspect = 0;               // lowest index among the argmin set
  std::vector<double> scores;    // per player: L1 gap of the others' type
};

/// Statistical deviator test: the suspect is the player whose opponents'
/// empirical type sits closest (L1) to the prescribed product.
SuspectScore identify_suspect(const StageGame& game,
                              const ProductDistribution& pstar,
                              const ActionBlock& actions);

/// Block code instance. Rebuildable bit-for-bit from
/// (game, monitoring, pstar, n, eps, seed).
class Codebook {
 public:
  /// raw_threshold 0 picks the default max(4, ceil(log2 n)).
  Codebook(StageGame game, MonitoringStructure monitoring,
           ProductDistribution pstar, int block_length, double eps,
           uint64_t seed, int raw_threshold = 0);

  const StageGame& game() const { return game_; }
  const MonitoringStructure& monitoring() const { return monitoring_; }
  const ProductDistribution& pstar() const { return pstar_; }
  int block_length() const { return n_; }
  double eps() const { return eps_; }
  uint64_t seed() const { return seed_; }
  int raw_threshold() const { return raw_threshold_; }
  const ConstraintReport& constraint() const { return constraint_; }
  const Coloring& coloring(int player) const { return colorings_.at(player); }

  /// Symbols a profile of the players other than `deviator` flattens to.
  int others_alphabet(int deviator) const { return others_size_[deviator]; }
  int flatten_others(int deviator, std::span<const int> profile) const;
  void unflatten_others(int deviator, int symbol, std::span<int> profile) const;

  /// Product law of the flattened others' symbol.
  const std::vector<double>& others_distribution(int deviator) const {
    return others_dist_[deviator];
  }

  /// Pair law of (others' symbol, decoder's signal) with the deviator's
  /// action pinned; row-major [symbol * |S_k| + s].
  const std::vector<double>& pair_joint(int deviator, int decoder,
                                        int action) const;

  /// Bits per symbol charged to a binned class: max over decoders of the
  /// residual entropy for (deviator, action).
  double class_entropy_bits(int deviator, int action) const {
    return class_entropy_[deviator][action];
  }
  /// min over decoders of I(others; signal, own action); the packing regime.
  double class_min_information(int deviator, int action) const {
    return class_min_info_[deviator][action];
  }

  /// ceil(2^(len * (class entropy + eps))), saturated at 2^62.
  uint64_t bin_count(int deviator, int action, int length) const;

  /// Seeded universal hash of a segment's symbol string.
  uint64_t segment_hash(int deviator, int action,
                        std::span<const int> symbols) const;

  const mpz_class& wire_capacity() const { return capacity_; }

  std::string serialize() const;

 private:
  StageGame game_;
  MonitoringStructure monitoring_;
  ProductDistribution pstar_;
  int n_;
  double eps_;
  uint64_t seed_;
  int raw_threshold_;
  ConstraintReport constraint_;
  std::vector<Coloring> colorings_;
  std::vector<int> others_size_;
  std::vector<std::vector<double>> others_dist_;
  std::vector<std::vector<double>> class_entropy_;   // [deviator][action]
  std::vector<std::vector<double>> class_min_info_;  // [deviator][action]
  // pair joints cached per (deviator, decoder, action)
  std::vector<std::vector<std::vector<std::vector<double>>>> pair_joint_;
  mpz_class capacity_;
};

/// Builds the codebook; refuses when the rate margin is insufficient
/// (required + 2*eps must not exceed capacity).
Codebook build_code(const StageGame& game, const MonitoringStructure& m,
                    const ProductDistribution& pstar, int block_length,
                    double eps, uint64_t seed, int raw_threshold = 0);

enum class EncodeStatus { Ok, EncoderDeclaredError, CapacityOverflow };

struct SegmentPayload {
  int action = 0;        // the suspect symbol this class collects
  int length = 0;
  bool raw = true;
  std::vector<int> symbols;  // others' flattened symbols, stage order
  uint64_t bin = 0;          // binned classes only
  uint64_t bins = 1;
};

/// Wire message. The flattened index packs, in extraction order:
/// suspect, colors stage-major, then one payload per suspect action in
/// action-index order (raw symbols stage by stage, or the bin index).
/// Index 0 is reserved for the encoder-declared-error wire, so the
/// rendered sequence is the fixed-width base-|S_0| expansion of the index
/// and the all-zero sequence is unambiguous.
struct EncodedMessage {
  EncodeStatus status = EncodeStatus::Ok;
  int suspect = 0;
  std::vector<int> colors;
  std::vector<SegmentPayload> segments;
  mpz_class index;            // 0 reserved for the error wire
  std::vector<int> rendered;  // length n over the public alphabet
};

/// Encode one block. forced_suspect >= 0 overrides the statistical test
/// (used by tests and diagnostics).
EncodedMessage encode(const Codebook& code, const ActionBlock& actions,
                      int forced_suspect = -1);

enum class DecodeStatus {
  Ok,
  ErrorWire,        // reserved all-zero sequence
  BadIndex,         // index outside the message range
  ColorMismatch,    // own action disagrees with the transmitted color
  NoFeasibleAction, // no action matches color + signal support
  ColorAmbiguous,   // several actions match
  ScanInfeasible,   // candidate space beyond the exhaustive-search cap
  NoTypicalCandidate,
  BinCollision,     // several candidates survive the bin + typicality filter
  Inconsistent      // decoded content contradicts the decoder's own actions
};

const char* to_string(DecodeStatus s);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Ok;
  int suspect = -1;
  std::vector<int> suspect_actions;  // decoded component of the suspect
  ActionBlock actions;               // full profile sequence when Ok
};

/// Candidate spaces larger than this are rejected (ScanInfeasible).
inline constexpr double kScanCapBits = 20.0;

/// Decode one block from the public wire plus the decoder's private
/// signals and own actions.
DecodeResult decode(const Codebook& code, int decoder,
                    const std::vector<int>& wire,
                    const std::vector<int>& own_signals,
                    const std::vector<int>& own_actions);

/// One step of the cardinality chain with its slack (bound - value).
struct ChainStep {
  std::string name;
  double value_bits;
  double bound_bits;
  bool asserted;  // pre-asymptotic steps are reported but not asserted
  bool holds() const { return value_bits <= bound_bits + 1e-9; }
};

struct RateAccounting {
  int suspect = 0;
  int raw_classes = 0;
  int binned_classes = 0;
  double scheme_rate_bits = 0.0;   // per-symbol cost of the realized message
  double required_rate_bits = 0.0;
  double capacity_bits = 0.0;
  double min_block_length = 0.0;   // below this the chain tail is not asserted
  bool pre_asymptotic = false;
  std::vector<ChainStep> steps;
  int violations = 0;

  std::string to_text() const;
};

/// Evaluates the cardinality chain for one realized block.
RateAccounting rate_accounting(const Codebook& code,
                               const ActionBlock& actions);

struct TrialRecord {
  uint64_t seed;
  int suspect_truth;  // -1 when no deviation
  int suspect_estimate;
  std::string error_class;  // "ok" or the failure tag
};

struct ErrorEstimate {
  uint64_t trials = 0;
  uint64_t mismatch_trials = 0;     // some decoder failed or disagreed
  uint64_t event_atypical = 0;      // a true (segment, side info) pair atypical
  uint64_t event_collision = 0;     // a false candidate survived the filter
  uint64_t suspect_misid = 0;
  uint64_t capacity_overflow = 0;
  uint64_t encoder_declared = 0;
  uint64_t other_failures = 0;
  std::vector<uint64_t> per_decoder;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<TrialRecord> trace;
};

/// Monte Carlo estimate of the block error probability under a deviation.
/// Deterministic in (master_seed, trials); trials are independent streams,
/// so the thread count does not change the result. suspect_only skips
/// encode/decode and tallies only the statistical test.
ErrorEstimate estimate_error_probability(const Codebook& code,
                                         const DeviationSpec& deviation,
                                         uint64_t trials, uint64_t master_seed,
                                         int jobs = 0,
                                         bool suspect_only = false,
                                         bool keep_trace = true);

/// Serial reference implementation (identical output).
ErrorEstimate estimate_error_probability_serial(const Codebook& code,
                                                const DeviationSpec& deviation,
                                                uint64_t trials,
                                                uint64_t master_seed,
                                                bool suspect_only = false,
                                                bool keep_trace = true);

struct CollisionEstimate {
  uint64_t trials = 0;
  uint64_t collisions = 0;          // typical, target bin, typical with fresh side info
  uint64_t independent_typical = 0; // fresh pair jointly typical, bin ignored
  uint64_t bins = 1;
  double packing_bound_bits = 0.0;  // len * (min information - eps)
  double collision_rate = 0.0;
  double independent_rate = 0.0;
};

/// How often an independently drawn sequence lands in a fixed bin and still
/// looks jointly typical with fresh side information; the event the bin
/// sizing must keep rare. The side information is taken from the decoder
/// with the least information (the binding one). bins_override 0 uses the
/// codebook's bin count for the class.
CollisionEstimate estimate_binning_collision(const Codebook& code,
                                             int deviator, int action,
                                             int segment_length,
                                             uint64_t trials, uint64_t seed,
                                             uint64_t bins_override = 0);

std::string trace_csv(const ErrorEstimate& estimate,
                      const std::string& deviation_desc);

}  // namespace relaymon

#endif
