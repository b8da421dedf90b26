#include "relaymon/codec.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaymon/prob.hpp"
#include "relaymon/typicality.hpp"

namespace relaymon {

SuspectScore identify_suspect(const StageGame& game,
                              const ProductDistribution& pstar,
                              const ActionBlock& actions) {
  const int K = game.player_count();
  const size_t n = actions.size();
  if (n == 0) throw ValidationError("identify_suspect: empty block");
  SuspectScore out;
  out.scores.assign(K, 0.0);

  for (int k = 0; k < K; ++k) {
    // flattened alphabet of the players other than k
    size_t alpha = 1;
    for (int j = 0; j < K; ++j)
      if (j != k) alpha *= game.action_count(j);
    std::vector<double> counts(alpha, 0.0);
    for (size_t t = 0; t < n; ++t) {
      size_t sym = 0;
      for (int j = 0; j < K; ++j)
        if (j != k)
          sym = sym * game.action_count(j) +
                static_cast<size_t>(actions[t][j]);
      counts[sym] += 1.0;
    }
    double score = 0.0;
    std::vector<int> profile(K, 0);
    for (size_t sym = 0; sym < alpha; ++sym) {
      size_t rest = sym;
      double prob = 1.0;
      for (int j = K - 1; j >= 0; --j) {
        if (j == k) continue;
        profile[j] = static_cast<int>(rest % game.action_count(j));
        rest /= game.action_count(j);
        prob *= pstar.prob(j, profile[j]);
      }
      score += std::abs(counts[sym] / static_cast<double>(n) - prob);
    }
    out.scores[k] = score;
  }
  out.suspect = static_cast<int>(
      std::min_element(out.scores.begin(), out.scores.end()) -
      out.scores.begin());
  return out;
}

Codebook::Codebook(StageGame game, MonitoringStructure monitoring,
                   ProductDistribution pstar, int block_length, double eps,
                   uint64_t seed, int raw_threshold)
    : game_(std::move(game)),
      monitoring_(std::move(monitoring)),
      pstar_(std::move(pstar)),
      n_(block_length),
      eps_(eps),
      seed_(seed) {
  if (n_ < 1) throw ValidationError("block length must be >= 1");
  if (eps_ <= 0.0) throw ValidationError("eps must be positive");
  if (raw_threshold < 0) throw ValidationError("raw threshold must be >= 0");
  validate_pair(game_, monitoring_);
  raw_threshold_ =
      raw_threshold > 0
          ? raw_threshold
          : std::max(4, static_cast<int>(std::ceil(std::log2(double(n_)))));
  constraint_ = evaluate_constraint(game_, monitoring_, pstar_);

  const int K = game_.player_count();
  colorings_.reserve(K);
  for (int i = 0; i < K; ++i) {
    auto g = build_confusability_graph(game_, monitoring_, pstar_, i);
    colorings_.push_back(minimal_coloring(g));
  }

  others_size_.assign(K, 1);
  others_dist_.resize(K);
  class_entropy_.resize(K);
  class_min_info_.resize(K);
  pair_joint_.resize(K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j)
      if (j != i) others_size_[i] *= game_.action_count(j);
    others_dist_[i].assign(others_size_[i], 0.0);
    std::vector<int> profile(K, 0);
    for (int sym = 0; sym < others_size_[i]; ++sym) {
      unflatten_others(i, sym, profile);
      double p = 1.0;
      for (int j = 0; j < K; ++j)
        if (j != i) p *= pstar_.prob(j, profile[j]);
      others_dist_[i][sym] = p;
    }
    double h_others = entropy(others_dist_[i]);

    class_entropy_[i].assign(game_.action_count(i), 0.0);
    class_min_info_[i].assign(game_.action_count(i), 0.0);
    pair_joint_[i].assign(
        K, std::vector<std::vector<double>>(game_.action_count(i)));
    for (int a = 0; a < game_.action_count(i); ++a) {
      double worst = 0.0;
      for (int k = 0; k < K; ++k) {
        double h = residual_entropy(game_, monitoring_, pstar_, i, k, a);
        worst = std::max(worst, h);
        pair_joint_[i][k][a] =
            side_info_joint(game_, monitoring_, pstar_, i, k, a).cells();
      }
      class_entropy_[i][a] = worst;
      class_min_info_[i][a] = h_others - worst;
    }
  }

  mpz_ui_pow_ui(capacity_.get_mpz_t(),
                static_cast<unsigned long>(monitoring_.public_alphabet_size()),
                static_cast<unsigned long>(n_));
}

int Codebook::flatten_others(int deviator, std::span<const int> profile) const {
  int sym = 0;
  for (int j = 0; j < game_.player_count(); ++j)
    if (j != deviator) sym = sym * game_.action_count(j) + profile[j];
  return sym;
}

void Codebook::unflatten_others(int deviator, int symbol,
                                std::span<int> profile) const {
  for (int j = game_.player_count() - 1; j >= 0; --j) {
    if (j == deviator) continue;
    profile[j] = symbol % game_.action_count(j);
    symbol /= game_.action_count(j);
  }
}

const std::vector<double>& Codebook::pair_joint(int deviator, int decoder,
                                                int action) const {
  return pair_joint_[deviator][decoder][action];
}

uint64_t Codebook::bin_count(int deviator, int action, int length) const {
  double e = length * (class_entropy_[deviator][action] + eps_);
  if (e >= 62.0) return 1ull << 62;  // beyond the exhaustive-decode regime
  double b = std::ceil(std::exp2(e));
  return std::max<uint64_t>(1, static_cast<uint64_t>(b));
}

uint64_t Codebook::segment_hash(int deviator, int action,
                                std::span<const int> symbols) const {
  uint64_t state = seed_ ^ (0x9e3779b97f4a7c15ull * (deviator * 131 + action + 1));
  uint64_t h = splitmix64(state);
  for (int s : symbols) {
    state = h ^ (static_cast<uint64_t>(s) + 0x165667b19e3779f9ull);
    h = splitmix64(state);
  }
  return h;
}

std::string Codebook::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "block_length " << n_ << "\n";
  os << "eps " << eps_ << "\n";
  os << "seed " << seed_ << "\n";
  os << "raw_threshold " << raw_threshold_ << "\n";
  os << "public_alphabet " << monitoring_.public_alphabet_size() << "\n";
  for (size_t i = 0; i < colorings_.size(); ++i) {
    os << "coloring " << i + 1 << " chi=" << colorings_[i].color_count << " [";
    for (size_t v = 0; v < colorings_[i].color_of.size(); ++v)
      os << (v ? " " : "") << colorings_[i].color_of[v];
    os << "]\n";
    for (int a = 0; a < game_.action_count(static_cast<int>(i)); ++a)
      os << "class " << i + 1 << ":" << a << " entropy_bits "
         << class_entropy_[i][a] << " min_info_bits " << class_min_info_[i][a]
         << "\n";
  }
  os << "required_rate_bits " << constraint_.required_rate_bits << "\n";
  return os.str();
}

Codebook build_code(const StageGame& game, const MonitoringStructure& m,
                    const ProductDistribution& pstar, int block_length,
                    double eps, uint64_t seed, int raw_threshold) {
  Codebook code(game, m, pstar, block_length, eps, seed, raw_threshold);
  double need = code.constraint().required_rate_bits + 2.0 * eps;
  double have = code.constraint().capacity_bits;
  if (need > have) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << "rate infeasible: required " +
              std::to_string(code.constraint().required_rate_bits) << " + 2*"
       << eps << " = " << need << " bits exceeds capacity " << have;
    throw ValidationError(os.str());
  }
  return code;
}

namespace {

struct ClassSplit {
  // per suspect action: stages where it was played
  std::vector<std::vector<int>> stages;
};

ClassSplit split_by_suspect(const Codebook& code, int suspect,
                            const std::vector<int>& suspect_actions) {
  ClassSplit s;
  s.stages.resize(code.game().action_count(suspect));
  for (size_t t = 0; t < suspect_actions.size(); ++t)
    s.stages[suspect_actions[t]].push_back(static_cast<int>(t));
  return s;
}

struct Field {
  uint64_t value;
  uint64_t radix;
};

}  // namespace

EncodedMessage encode(const Codebook& code, const ActionBlock& actions,
                      int forced_suspect) {
  const StageGame& game = code.game();
  const int K = game.player_count();
  const int n = code.block_length();
  if (static_cast<int>(actions.size()) != n)
    throw ValidationError("encode: block length mismatch");

  EncodedMessage msg;
  msg.suspect = forced_suspect >= 0
                    ? forced_suspect
                    : identify_suspect(game, code.pstar(), actions).suspect;
  const int i = msg.suspect;
  const Coloring& coloring = code.coloring(i);

  msg.colors.resize(n);
  std::vector<int> suspect_seq(n);
  for (int t = 0; t < n; ++t) {
    suspect_seq[t] = actions[t][i];
    msg.colors[t] = coloring.color_of[suspect_seq[t]];
  }

  ClassSplit split = split_by_suspect(code, i, suspect_seq);
  for (int a = 0; a < game.action_count(i); ++a) {
    SegmentPayload seg;
    seg.action = a;
    seg.length = static_cast<int>(split.stages[a].size());
    seg.symbols.reserve(seg.length);
    for (int t : split.stages[a])
      seg.symbols.push_back(code.flatten_others(i, actions[t]));
    seg.raw = seg.length <= code.raw_threshold();
    if (!seg.raw) {
      if (!is_typical(seg.symbols, code.others_distribution(i), code.eps())) {
        msg.status = EncodeStatus::EncoderDeclaredError;
        msg.segments.push_back(std::move(seg));
        continue;
      }
      seg.bins = code.bin_count(i, a, seg.length);
      seg.bin = code.segment_hash(i, a, seg.symbols) % seg.bins;
    }
    msg.segments.push_back(std::move(seg));
  }
  if (msg.status == EncodeStatus::EncoderDeclaredError) {
    msg.index = 0;
    msg.rendered.assign(n, 0);  // reserved error wire
    return msg;
  }

  // Mixed-radix pack; fields pushed in reverse extraction order so the
  // decoder can peel them off front first.
  std::vector<Field> fields;
  fields.push_back({static_cast<uint64_t>(msg.suspect),
                    static_cast<uint64_t>(K)});
  uint64_t chi = static_cast<uint64_t>(coloring.color_count);
  for (int t = 0; t < n; ++t)
    fields.push_back({static_cast<uint64_t>(msg.colors[t]), chi});
  uint64_t others_radix = static_cast<uint64_t>(code.others_alphabet(i));
  for (const SegmentPayload& seg : msg.segments) {
    if (seg.raw) {
      for (int s : seg.symbols)
        fields.push_back({static_cast<uint64_t>(s), others_radix});
    } else {
      fields.push_back({seg.bin, seg.bins});
    }
  }

  mpz_class v = 0;
  for (size_t f = fields.size(); f-- > 0;) {
    if (fields[f].radix > 1) {
      v *= mpz_class(static_cast<unsigned long>(fields[f].radix));
      v += mpz_class(static_cast<unsigned long>(fields[f].value));
    }
  }
  msg.index = v + 1;

  if (msg.index >= code.wire_capacity()) {
    msg.status = EncodeStatus::CapacityOverflow;
    return msg;
  }

  // fixed-width base-|S_0| rendering, most significant digit first
  msg.rendered.assign(n, 0);
  mpz_class rest = msg.index;
  unsigned long base =
      static_cast<unsigned long>(code.monitoring().public_alphabet_size());
  for (int d = n - 1; d >= 0 && rest != 0; --d) {
    mpz_class q, r;
    mpz_tdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), base);
    msg.rendered[d] = static_cast<int>(r.get_ui());
    rest = q;
  }
  return msg;
}

const char* to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::Ok: return "ok";
    case DecodeStatus::ErrorWire: return "error_wire";
    case DecodeStatus::BadIndex: return "bad_index";
    case DecodeStatus::ColorMismatch: return "color_mismatch";
    case DecodeStatus::NoFeasibleAction: return "no_feasible_action";
    case DecodeStatus::ColorAmbiguous: return "color_ambiguous";
    case DecodeStatus::ScanInfeasible: return "scan_infeasible";
    case DecodeStatus::NoTypicalCandidate: return "no_typical_candidate";
    case DecodeStatus::BinCollision: return "bin_collision";
    case DecodeStatus::Inconsistent: return "inconsistent";
  }
  return "?";
}

namespace {

// Stage-level recovery of the suspect's action from color + side info:
// the unique action carrying the transmitted color that can produce the
// observed signal against some supported opponents' profile.
DecodeStatus recover_suspect_action(const Codebook& code, int suspect,
                                    int decoder, int color, int signal,
                                    int own_action, int* out) {
  const StageGame& game = code.game();
  const MonitoringStructure& m = code.monitoring();
  const int K = game.player_count();
  auto support = code.pstar().support_excluding(suspect, 1e-12);
  std::vector<int> others_order;
  for (int j = 0; j < K; ++j)
    if (j != suspect) others_order.push_back(j);

  int found = -1;
  std::vector<int> profile(K);
  for (int a = 0; a < game.action_count(suspect); ++a) {
    if (code.coloring(suspect).color_of[a] != color) continue;
    bool feasible = false;
    std::vector<size_t> cursor(support.size(), 0);
    bool done = false;
    while (!done && !feasible) {
      bool consistent = true;
      for (size_t j = 0; j < support.size(); ++j) {
        int player = others_order[j];
        int act = support[j][cursor[j]];
        if (player == decoder && act != own_action) consistent = false;
        profile[player] = act;
      }
      profile[suspect] = a;
      if (consistent &&
          m.marginal(decoder, game.profile_index(profile), signal) > 1e-12)
        feasible = true;
      done = true;
      for (size_t j = support.size(); j-- > 0;) {
        if (++cursor[j] < support[j].size()) {
          done = false;
          break;
        }
        cursor[j] = 0;
      }
    }
    if (feasible) {
      if (found >= 0) return DecodeStatus::ColorAmbiguous;
      found = a;
    }
  }
  if (found < 0) return DecodeStatus::NoFeasibleAction;
  *out = found;
  return DecodeStatus::Ok;
}

}  // namespace

DecodeResult decode(const Codebook& code, int decoder,
                    const std::vector<int>& wire,
                    const std::vector<int>& own_signals,
                    const std::vector<int>& own_actions) {
  const StageGame& game = code.game();
  const int K = game.player_count();
  const int n = code.block_length();
  DecodeResult res;
  if (static_cast<int>(wire.size()) != n ||
      static_cast<int>(own_signals.size()) != n ||
      static_cast<int>(own_actions.size()) != n)
    throw ValidationError("decode: block length mismatch");

  mpz_class v = 0;
  unsigned long base =
      static_cast<unsigned long>(code.monitoring().public_alphabet_size());
  for (int d = 0; d < n; ++d) {
    v *= mpz_class(static_cast<unsigned long>(base));
    v += mpz_class(static_cast<unsigned long>(wire[d]));
  }
  if (v == 0) {
    res.status = DecodeStatus::ErrorWire;
    return res;
  }
  if (v >= code.wire_capacity()) {
    res.status = DecodeStatus::BadIndex;
    return res;
  }
  v -= 1;

  auto take = [&v](uint64_t radix) -> uint64_t {
    if (radix <= 1) return 0;
    mpz_class q, r;
    mpz_tdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(),
                   static_cast<unsigned long>(radix));
    v = q;
    return r.get_ui();
  };

  const int i = static_cast<int>(take(static_cast<uint64_t>(K)));
  res.suspect = i;
  const Coloring& coloring = code.coloring(i);
  uint64_t chi = static_cast<uint64_t>(coloring.color_count);

  std::vector<int> colors(n);
  for (int t = 0; t < n; ++t) colors[t] = static_cast<int>(take(chi));

  // component of the suspect, stage by stage
  res.suspect_actions.assign(n, -1);
  for (int t = 0; t < n; ++t) {
    if (decoder == i) {
      if (coloring.color_of[own_actions[t]] != colors[t]) {
        res.status = DecodeStatus::ColorMismatch;
        return res;
      }
      res.suspect_actions[t] = own_actions[t];
    } else {
      int a = -1;
      DecodeStatus st = recover_suspect_action(
          code, i, decoder, colors[t], own_signals[t], own_actions[t], &a);
      if (st != DecodeStatus::Ok) {
        res.status = st;
        return res;
      }
      res.suspect_actions[t] = a;
    }
  }

  ClassSplit split = split_by_suspect(code, i, res.suspect_actions);
  const int others_radix = code.others_alphabet(i);

  // the players whose actions the decoder must actually search over
  std::vector<int> free_players;
  for (int j = 0; j < K; ++j)
    if (j != i && j != decoder) free_players.push_back(j);
  size_t free_alpha = 1;
  for (int j : free_players) free_alpha *= game.action_count(j);

  res.actions.assign(n, std::vector<int>(K, -1));
  for (int t = 0; t < n; ++t) res.actions[t][i] = res.suspect_actions[t];

  std::vector<int> profile(K);
  for (int a = 0; a < game.action_count(i); ++a) {
    const auto& stages = split.stages[a];
    const int len = static_cast<int>(stages.size());
    if (len == 0) continue;
    bool raw = len <= code.raw_threshold();
    if (raw) {
      for (int t : stages) {
        int sym = static_cast<int>(take(static_cast<uint64_t>(others_radix)));
        code.unflatten_others(i, sym, profile);
        for (int j = 0; j < K; ++j)
          if (j != i) res.actions[t][j] = profile[j];
      }
      continue;
    }
    uint64_t bins = code.bin_count(i, a, len);
    uint64_t bin = take(bins);

    if (free_alpha > 1 &&
        len * std::log2(double(free_alpha)) > kScanCapBits) {
      res.status = DecodeStatus::ScanInfeasible;
      return res;
    }

    // candidate others-symbol sequence; the decoder's own component is
    // pinned, the free players' actions are searched exhaustively
    std::vector<int> candidate(len);
    std::vector<int> winner;
    int winners = 0;
    size_t combos = 1;
    for (int c = 0; c < len; ++c) combos *= free_alpha;
    const std::vector<double>& joint = code.pair_joint(i, decoder, a);
    const int sig_n = code.monitoring().signal_count(decoder);

    std::vector<int> seg_signals(len);
    for (int c = 0; c < len; ++c) seg_signals[c] = own_signals[stages[c]];

    for (size_t combo = 0; combo < combos; ++combo) {
      size_t rest = combo;
      for (int c = 0; c < len; ++c) {
        size_t pick = rest % free_alpha;
        rest /= free_alpha;
        size_t sub = pick;
        profile[i] = a;
        for (size_t fj = free_players.size(); fj-- > 0;) {
          int j = free_players[fj];
          profile[j] = static_cast<int>(sub % game.action_count(j));
          sub /= game.action_count(j);
        }
        if (decoder != i) profile[decoder] = own_actions[stages[c]];
        candidate[c] = code.flatten_others(i, profile);
      }
      if (code.segment_hash(i, a, candidate) % bins != bin) continue;
      if (free_alpha > 1 || decoder == i) {
        if (!is_jointly_typical(candidate, seg_signals, joint, others_radix,
                                sig_n, code.eps()))
          continue;
      }
      ++winners;
      if (winners > 1) break;
      winner = candidate;
    }
    if (winners == 0) {
      res.status = free_alpha == 1 && decoder != i
                       ? DecodeStatus::Inconsistent
                       : DecodeStatus::NoTypicalCandidate;
      return res;
    }
    if (winners > 1) {
      res.status = DecodeStatus::BinCollision;
      return res;
    }
    for (int c = 0; c < len; ++c) {
      code.unflatten_others(i, winner[c], profile);
      for (int j = 0; j < K; ++j)
        if (j != i) res.actions[stages[c]][j] = profile[j];
    }
  }

  if (v != 0) {  // the index must be consumed exactly by the field radices
    res.status = DecodeStatus::BadIndex;
    return res;
  }
  if (decoder != i) {
    for (int t = 0; t < n; ++t)
      if (res.actions[t][decoder] != own_actions[t]) {
        res.status = DecodeStatus::Inconsistent;
        return res;
      }
  }
  res.status = DecodeStatus::Ok;
  return res;
}

std::string RateAccounting::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "suspect " << suspect + 1 << " raw_classes " << raw_classes
     << " binned_classes " << binned_classes << "\n";
  os << "scheme_rate_bits " << scheme_rate_bits << " required_rate_bits "
     << required_rate_bits << " capacity_bits " << capacity_bits << "\n";
  if (pre_asymptotic)
    os << "pre-asymptotic block (n < " << min_block_length
       << "): capacity overflow possible, tail inequality not asserted\n";
  for (const auto& s : steps) {
    os << (s.holds() ? "  ok  " : "  VIOLATED  ") << s.name << ": "
       << s.value_bits << " <= " << s.bound_bits
       << (s.asserted ? "" : " (reported only)") << "\n";
  }
  os << "violations " << violations << "\n";
  return os.str();
}

RateAccounting rate_accounting(const Codebook& code,
                               const ActionBlock& actions) {
  const StageGame& game = code.game();
  const int n = code.block_length();
  RateAccounting acc;
  acc.required_rate_bits = code.constraint().required_rate_bits;
  acc.capacity_bits = code.constraint().capacity_bits;

  SuspectScore ss = identify_suspect(game, code.pstar(), actions);
  acc.suspect = ss.suspect;
  const int i = acc.suspect;

  std::vector<int> suspect_seq(n);
  for (int t = 0; t < n; ++t) suspect_seq[t] = actions[t][i];
  ClassSplit split = split_by_suspect(code, i, suspect_seq);

  const double log_k = std::log2(double(game.player_count()));
  const double log_chi = std::log2(double(code.coloring(i).color_count));
  const double log_others = std::log2(double(code.others_alphabet(i)));
  const double eps = code.eps();

  double raw_bits = 0.0, binned_bits = 0.0, binned_frac_bits = 0.0;
  double max_class_entropy = 0.0;
  for (int a = 0; a < game.action_count(i); ++a)
    max_class_entropy = std::max(max_class_entropy,
                                 code.class_entropy_bits(i, a));
  for (int a = 0; a < game.action_count(i); ++a) {
    int len = static_cast<int>(split.stages[a].size());
    if (len == 0) continue;
    if (len <= code.raw_threshold()) {
      acc.raw_classes++;
      raw_bits += len * log_others;
    } else {
      acc.binned_classes++;
      binned_bits += len * (code.class_entropy_bits(i, a) + eps);
      binned_frac_bits += (double(len) / n) * (code.class_entropy_bits(i, a) + eps);
    }
  }

  acc.scheme_rate_bits =
      (log_k + n * log_chi + raw_bits + binned_bits) / n;
  double step1 = log_chi +
                 (log_k + code.raw_threshold() * acc.raw_classes * log_others) / n +
                 binned_frac_bits;
  double step2 = max_class_entropy + log_chi +
                 (log_k + code.raw_threshold() * game.action_count(i) *
                              log_others) / n +
                 eps;
  double step3 = acc.required_rate_bits + 2.0 * eps;
  double step4 = acc.required_rate_bits + 3.0 * eps;

  acc.min_block_length =
      (log_k + code.raw_threshold() * game.action_count(i) * log_others) / eps;
  acc.pre_asymptotic = n < acc.min_block_length;

  acc.steps.push_back({"scheme <= class-count bound", acc.scheme_rate_bits,
                       step1, true});
  acc.steps.push_back({"class-count bound <= worst-class bound", step1, step2,
                       true});
  acc.steps.push_back({"worst-class bound <= required + 2eps", step2, step3,
                       !acc.pre_asymptotic});
  acc.steps.push_back({"required + 3eps <= capacity", step4,
                       acc.capacity_bits, !acc.pre_asymptotic});
  for (const auto& s : acc.steps)
    if (s.asserted && !s.holds()) acc.violations++;
  return acc;
}

namespace {

struct TrialOutcome {
  bool mismatch = false;
  bool e1 = false;
  bool e2 = false;
  bool misid = false;
  bool overflow = false;
  bool encoder_declared = false;
  bool other = false;
  std::vector<char> decoder_bad;
  TrialRecord record;
};

TrialOutcome run_trial(const Codebook& code, const DeviationSpec& deviation,
                       uint64_t master_seed, uint64_t trial,
                       bool suspect_only) {
  const StageGame& game = code.game();
  const MonitoringStructure& m = code.monitoring();
  const int K = game.player_count();
  const int n = code.block_length();

  TrialOutcome out;
  out.decoder_bad.assign(K, 0);
  uint64_t seed = derive_seed(master_seed, trial);
  out.record.seed = seed;
  Rng rng(seed);

  ActionBlock actions(n);
  SignalBlock signals(n);
  for (int t = 0; t < n; ++t) {
    actions[t] = sample_profile(game, code.pstar(), deviation,
                                static_cast<uint64_t>(t), rng);
    signals[t] =
        sample_signals(m, game.profile_index(actions[t]), rng);
  }

  SuspectScore ss = identify_suspect(game, code.pstar(), actions);
  out.record.suspect_truth = deviation.active() ? deviation.player() : -1;
  out.record.suspect_estimate = ss.suspect;
  out.misid = deviation.active() && ss.suspect != deviation.player();
  if (suspect_only) {
    out.record.error_class = out.misid ? "suspect_misid" : "ok";
    return out;
  }

  EncodedMessage msg = encode(code, actions);
  const int i = msg.suspect;

  // true-pair atypicality, checked from the ground truth
  {
    std::vector<int> suspect_seq(n);
    for (int t = 0; t < n; ++t) suspect_seq[t] = actions[t][i];
    ClassSplit split = split_by_suspect(code, i, suspect_seq);
    for (int a = 0; a < game.action_count(i) && !out.e1; ++a) {
      int len = static_cast<int>(split.stages[a].size());
      if (len <= code.raw_threshold()) continue;
      std::vector<int> seg(len);
      for (int c = 0; c < len; ++c)
        seg[c] = code.flatten_others(i, actions[split.stages[a][c]]);
      for (int k = 0; k < K && !out.e1; ++k) {
        std::vector<int> sk(len);
        for (int c = 0; c < len; ++c) sk[c] = signals[split.stages[a][c]][k];
        if (!is_jointly_typical(seg, sk, code.pair_joint(i, k, a),
                                code.others_alphabet(i), m.signal_count(k),
                                code.eps()))
          out.e1 = true;
      }
    }
  }

  if (msg.status == EncodeStatus::EncoderDeclaredError) {
    out.encoder_declared = true;
    out.e1 = true;  // a marginal-atypical segment makes every pair atypical
    out.mismatch = true;
    std::fill(out.decoder_bad.begin(), out.decoder_bad.end(), 1);
    out.record.error_class = "encoder_declared";
    return out;
  }
  if (msg.status == EncodeStatus::CapacityOverflow) {
    out.overflow = true;
    out.mismatch = true;
    std::fill(out.decoder_bad.begin(), out.decoder_bad.end(), 1);
    out.record.error_class = "capacity_overflow";
    return out;
  }

  std::string worst = "ok";
  for (int k = 0; k < K; ++k) {
    std::vector<int> own_sig(n), own_act(n);
    for (int t = 0; t < n; ++t) {
      own_sig[t] = signals[t][k];
      own_act[t] = actions[t][k];
    }
    DecodeResult dr = decode(code, k, msg.rendered, own_sig, own_act);
    bool ok = dr.status == DecodeStatus::Ok && dr.actions == actions;
    if (!ok) {
      out.decoder_bad[k] = 1;
      out.mismatch = true;
      if (dr.status == DecodeStatus::BinCollision) {
        out.e2 = true;
        worst = "bin_collision";
      } else if (dr.status == DecodeStatus::Ok) {
        out.e2 = true;  // a wrong candidate survived the filter
        worst = "false_candidate";
      } else if (dr.status == DecodeStatus::NoTypicalCandidate) {
        worst = "no_typical_candidate";  // e1 already set from the truth
      } else {
        out.other = true;
        worst = to_string(dr.status);
      }
    }
  }
  out.record.error_class = out.mismatch ? worst : "ok";
  return out;
}

void fold_outcomes(const std::vector<TrialOutcome>& outs, int players,
                   bool keep_trace, ErrorEstimate& est) {
  est.per_decoder.assign(players, 0);
  for (const TrialOutcome& o : outs) {
    est.mismatch_trials += o.mismatch;
    est.event_atypical += o.e1;
    est.event_collision += o.e2;
    est.suspect_misid += o.misid;
    est.capacity_overflow += o.overflow;
    est.encoder_declared += o.encoder_declared;
    est.other_failures += o.other;
    for (int k = 0; k < players; ++k) est.per_decoder[k] += o.decoder_bad[k];
    if (keep_trace) est.trace.push_back(o.record);
  }
  est.estimate =
      est.trials ? double(est.mismatch_trials) / double(est.trials) : 0.0;
  // Wilson interval at 95%
  if (est.trials) {
    double z = 1.959963984540054;
    double t = double(est.trials);
    double p = est.estimate;
    double denom = 1.0 + z * z / t;
    double center = (p + z * z / (2 * t)) / denom;
    double half = z * std::sqrt(p * (1 - p) / t + z * z / (4 * t * t)) / denom;
    est.ci_low = std::min(std::max(0.0, center - half), est.estimate);
    est.ci_high = std::max(std::min(1.0, center + half), est.estimate);
  }
}

}  // namespace

ErrorEstimate estimate_error_probability_serial(const Codebook& code,
                                                const DeviationSpec& deviation,
                                                uint64_t trials,
                                                uint64_t master_seed,
                                                bool suspect_only,
                                                bool keep_trace) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  std::vector<TrialOutcome> outs(trials);
  for (uint64_t t = 0; t < trials; ++t)
    outs[t] = run_trial(code, deviation, master_seed, t, suspect_only);
  ErrorEstimate est;
  est.trials = trials;
  fold_outcomes(outs, code.game().player_count(), keep_trace, est);
  return est;
}

ErrorEstimate estimate_error_probability(const Codebook& code,
                                         const DeviationSpec& deviation,
                                         uint64_t trials, uint64_t master_seed,
                                         int jobs, bool suspect_only,
                                         bool keep_trace) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  std::vector<TrialOutcome> outs(trials);
  const int64_t count = static_cast<int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 16) num_threads( \
    jobs > 0 ? jobs : omp_get_max_threads())
  for (int64_t t = 0; t < count; ++t)
    outs[t] = run_trial(code, deviation, master_seed,
                        static_cast<uint64_t>(t), suspect_only);
  ErrorEstimate est;
  est.trials = trials;
  fold_outcomes(outs, code.game().player_count(), keep_trace, est);
  return est;
}

CollisionEstimate estimate_binning_collision(const Codebook& code,
                                             int deviator, int action,
                                             int segment_length,
                                             uint64_t trials, uint64_t seed,
                                             uint64_t bins_override) {
  if (segment_length <= code.raw_threshold())
    throw ValidationError(
        "binning collision: class of this length is raw, not binned");
  const StageGame& game = code.game();
  const int K = game.player_count();

  // decoder with the least side information is the binding one
  int k_star = 0;
  double worst = -1.0;
  for (int k = 0; k < K; ++k) {
    double h = residual_entropy(game, code.monitoring(), code.pstar(),
                                deviator, k, action);
    if (h > worst) {
      worst = h;
      k_star = k;
    }
  }

  CollisionEstimate ce;
  ce.trials = trials;
  ce.bins = bins_override ? bins_override
                          : code.bin_count(deviator, action, segment_length);
  ce.packing_bound_bits =
      segment_length * (code.class_min_information(deviator, action) -
                        code.eps());

  const std::vector<double>& others = code.others_distribution(deviator);
  const std::vector<double>& joint = code.pair_joint(deviator, k_star, action);
  const int sig_n = code.monitoring().signal_count(k_star);
  const int alpha = code.others_alphabet(deviator);

  // conditional signal laws per others-symbol
  std::vector<std::vector<double>> cond(alpha, std::vector<double>(sig_n, 0.0));
  for (int x = 0; x < alpha; ++x) {
    double px = others[x];
    for (int s = 0; s < sig_n; ++s)
      cond[x][s] = px > 0.0 ? joint[x * sig_n + s] / px : (s == 0 ? 1.0 : 0.0);
  }

  for (uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    std::vector<int> x(segment_length), y(segment_length), s(segment_length);
    for (int c = 0; c < segment_length; ++c) {
      x[c] = rng.categorical(others);  // candidate sequence
      y[c] = rng.categorical(others);  // fresh source for the side info
      s[c] = rng.categorical(cond[y[c]]);
    }
    bool pair_typical =
        is_jointly_typical(x, s, joint, alpha, sig_n, code.eps());
    if (pair_typical) ce.independent_typical++;
    if (pair_typical && is_typical(x, others, code.eps()) &&
        code.segment_hash(deviator, action, x) % ce.bins == 0)
      ce.collisions++;
  }
  ce.collision_rate = trials ? double(ce.collisions) / double(trials) : 0.0;
  ce.independent_rate =
      trials ? double(ce.independent_typical) / double(trials) : 0.0;
  return ce;
}

std::string trace_csv(const ErrorEstimate& estimate,
                      const std::string& deviation_desc) {
  std::ostringstream os;
  os << "trial,seed,deviation,suspect_truth,suspect_estimate,error_class\n";
  for (size_t t = 0; t < estimate.trace.size(); ++t) {
    const TrialRecord& r = estimate.trace[t];
    os << t << "," << r.seed << "," << deviation_desc << ","
       << (r.suspect_truth >= 0 ? std::to_string(r.suspect_truth + 1) : "none")
       << "," << r.suspect_estimate + 1 << "," << r.error_class << "\n";
  }
  return os.str();
}

}  // namespace relaymon
