#include "relaymon/info.hpp"

#include <cmath>
#include <sstream>

namespace relaymon {

std::string ConstraintReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "required_rate_bits " << required_rate_bits << "\n";
  os << "capacity_bits " << capacity_bits << "\n";
  os << "verdict " << (satisfied ? "SATISFIED" : "VIOLATED") << "\n";
  os << "argmax deviator=" << argmax_deviator + 1
     << " decoder=" << argmax_decoder + 1 << " action=" << argmax_action
     << "\n";
  for (size_t i = 0; i < per_deviator.size(); ++i) {
    os << "deviator " << i + 1 << ": chi=" << chromatic[i]
       << (chromatic_exact[i] ? "" : " (upper bound)")
       << " rate=" << per_deviator[i] << "\n";
  }
  for (const auto& t : terms) {
    os << "  H[deviator=" << t.deviator + 1 << " decoder=" << t.decoder + 1
       << " action=" << t.action << "] = " << t.bits << "\n";
  }
  return os.str();
}

JointDistribution side_info_joint(const StageGame& game,
                                  const MonitoringStructure& m,
                                  const ProductDistribution& pstar,
                                  int deviator, int decoder, int action) {
  const int K = game.player_count();
  std::vector<int> others;
  for (int k = 0; k < K; ++k)
    if (k != deviator) others.push_back(k);

  std::vector<int> sizes;
  for (int k : others) sizes.push_back(game.action_count(k));
  sizes.push_back(m.signal_count(decoder));

  size_t cells_n = 1;
  for (int s : sizes) cells_n *= static_cast<size_t>(s);
  std::vector<double> cells(cells_n, 0.0);

  std::vector<int> profile(K);
  profile[deviator] = action;
  std::vector<int> idx(others.size() + 1, 0);
  size_t others_total = cells_n / m.signal_count(decoder);
  for (size_t flat = 0; flat < others_total; ++flat) {
    size_t rest = flat;
    for (size_t j = others.size(); j-- > 0;) {
      idx[j] = static_cast<int>(rest % game.action_count(others[j]));
      rest /= game.action_count(others[j]);
    }
    double p_others = 1.0;
    for (size_t j = 0; j < others.size(); ++j) {
      profile[others[j]] = idx[j];
      p_others *= pstar.prob(others[j], idx[j]);
    }
    if (p_others == 0.0) continue;
    size_t ap = game.profile_index(profile);
    for (int s = 0; s < m.signal_count(decoder); ++s) {
      double q = m.marginal(decoder, ap, s);
      if (q == 0.0) continue;
      cells[flat * m.signal_count(decoder) + s] = p_others * q;
    }
  }
  return JointDistribution(std::move(sizes), std::move(cells));
}

double residual_entropy(const StageGame& game, const MonitoringStructure& m,
                        const ProductDistribution& pstar, int deviator,
                        int decoder, int action) {
  const int K = game.player_count();
  if (deviator < 0 || deviator >= K || decoder < 0 || decoder >= K)
    throw ValidationError("invalid player index");
  if (action < 0 || action >= game.action_count(deviator))
    throw ValidationError("invalid action index");

  JointDistribution joint =
      side_info_joint(game, m, pstar, deviator, decoder, action);

  // axes: others (players != deviator, index order), then the signal
  std::vector<int> target, given;
  int axis = 0;
  for (int k = 0; k < K; ++k) {
    if (k == deviator) continue;
    if (k == decoder)
      given.push_back(axis);
    else
      target.push_back(axis);
    ++axis;
  }
  given.push_back(axis);  // signal axis
  return conditional_entropy(joint, target, given);
}

ConstraintReport evaluate_constraint(const StageGame& game,
                                     const MonitoringStructure& m,
                                     const ProductDistribution& pstar,
                                     double support_cutoff) {
  validate_pair(game, m);
  const int K = game.player_count();
  ConstraintReport rep;
  rep.capacity_bits = std::log2(static_cast<double>(m.public_alphabet_size()));
  rep.per_deviator.assign(K, 0.0);
  rep.chromatic.assign(K, 0);
  rep.chromatic_exact.assign(K, false);

  double best = -1.0;
  for (int i = 0; i < K; ++i) {
    auto graph = build_confusability_graph(game, m, pstar, i, support_cutoff);
    Coloring coloring = minimal_coloring(graph);
    rep.chromatic[i] = coloring.color_count;
    rep.chromatic_exact[i] = coloring.exact;

    double inner = 0.0;
    int inner_k = 0, inner_a = 0;
    for (int k = 0; k < K; ++k) {
      for (int a = 0; a < game.action_count(i); ++a) {
        double h = residual_entropy(game, m, pstar, i, k, a);
        rep.terms.push_back({i, k, a, h});
        if (h > inner) {
          inner = h;
          inner_k = k;
          inner_a = a;
        }
      }
    }
    rep.per_deviator[i] = inner + std::log2(double(coloring.color_count));
    if (rep.per_deviator[i] > best) {
      best = rep.per_deviator[i];
      rep.argmax_deviator = i;
      rep.argmax_decoder = inner_k;
      rep.argmax_action = inner_a;
    }
  }
  rep.required_rate_bits = best;
  rep.satisfied = rep.required_rate_bits < rep.capacity_bits;
  return rep;
}

bool in_constraint_set(const StageGame& game, const MonitoringStructure& m,
                       const ProductDistribution& pstar,
                       double support_cutoff) {
  return evaluate_constraint(game, m, pstar, support_cutoff).satisfied;
}

namespace {

// z * log2(w / z) with the zero-mass conventions.
double plogq(double z, double w) {
  if (z <= 0.0) return 0.0;
  return z * std::log2(w / z);
}

// The four-log expression for one opponent distribution (p, 1-p):
// H(opponent's action | observed signal) under the flip-delta/2 channel.
double four_term(double p, double delta) {
  double g = 1.0 - delta / 2.0;
  double b = delta / 2.0;
  double q = 1.0 - p;
  double w_right = p * g + q * b;  // signal agreeing with the first action
  double w_wrong = p * b + q * g;
  return plogq(p * g, w_right) + plogq(q * b, w_right) +
         plogq(p * b, w_wrong) + plogq(q * g, w_wrong);
}

}  // namespace

double closed_form_rate_binary(double delta,
                               const ProductDistribution& pstar) {
  if (delta <= 0.0 || delta > 1.0)
    throw ValidationError("closed form needs delta in (0,1]");
  if (pstar.player_count() != 2 || pstar.player(0).size() != 2 ||
      pstar.player(1).size() != 2)
    throw ValidationError("closed form is for two binary players");
  double term_vs_1 = four_term(pstar.prob(1, 0), delta);  // deviator 1 branch
  double term_vs_2 = four_term(pstar.prob(0, 0), delta);  // deviator 2 branch
  return std::max(term_vs_1, term_vs_2) + 1.0;  // one bit of coloring cost
}

}  // namespace relaymon
