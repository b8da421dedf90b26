#ifndef RELAYMON_INFO_HPP
#define RELAYMON_INFO_HPP

#include <string>
#include <vector>

#include "relaymon/game.hpp"
#include "relaymon/graph.hpp"
#include "relaymon/prob.hpp"

namespace relaymon {

/// One conditional-entropy term of the rate formula.
struct RateTerm {
  int deviator;
  int decoder;
  int action;   // deviator's fixed action
  double bits;  // H(others' actions | decoder's signal, decoder's action)
};

/// Everything the rate evaluation produced: per-term entropies, the
/// coloring cost per candidate deviator, the required rate and the verdict
/// against the public-channel capacity (strict inequality).
struct ConstraintReport {
  std::vector<RateTerm> terms;
  std::vector<int> chromatic;          // per player
  std::vector<bool> chromatic_exact;   // per player
  std::vector<double> per_deviator;    // inner max + log2 chi, per player
  double required_rate_bits = 0.0;     // max over deviators
  double capacity_bits = 0.0;          // log2 |S_0|
  bool satisfied = false;              // required < capacity, strict
  int argmax_deviator = -1;
  int argmax_decoder = -1;
  int argmax_action = -1;

  std::string to_text() const;
};

/// Joint law of (others' actions, decoder's signal) when the deviator pins
/// its action: axes are the non-deviator players in index order, then s_k.
JointDistribution side_info_joint(const StageGame& game,
                                  const MonitoringStructure& m,
                                  const ProductDistribution& pstar,
                                  int deviator, int decoder, int action);

/// H(a_{-i,k} | s_k(a_i), a_k) in bits. Zero when no player remains
/// outside {deviator, decoder}.
double residual_entropy(const StageGame& game, const MonitoringStructure& m,
                        const ProductDistribution& pstar, int deviator,
                        int decoder, int action);

/// Evaluates the full rate formula:
///   required = max_i [ max_{k, a_i} H(a_{-i,k} | s_k(a_i), a_k) + log2 chi_i ]
/// The inner max ranges over every deviator action (support or not) and
/// every decoder including the deviator itself.
ConstraintReport evaluate_constraint(const StageGame& game,
                                     const MonitoringStructure& m,
                                     const ProductDistribution& pstar,
                                     double support_cutoff = 1e-12);

/// required_rate < capacity, strictly.
bool in_constraint_set(const StageGame& game, const MonitoringStructure& m,
                       const ProductDistribution& pstar,
                       double support_cutoff = 1e-12);

/// Closed-form required rate for the two-player binary game under the
/// binary_symmetric(delta) monitoring family, delta in (0,1]: the larger of
/// the two explicit four-log expressions plus one bit of coloring cost.
/// Serves as an independent cross-check of evaluate_constraint on this
/// family. Rejects delta == 0 (the one-bit coloring cost assumes delta > 0).
double closed_form_rate_binary(double delta, const ProductDistribution& pstar);

}  // namespace relaymon

#endif
