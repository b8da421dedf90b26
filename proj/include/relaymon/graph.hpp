#ifndef RELAYMON_GRAPH_HPP
#define RELAYMON_GRAPH_HPP

#include <cstdint>
#include <vector>

#include "relaymon/game.hpp"

namespace relaymon {

/// Where an edge came from: the opponents' profile, the decoding player and
/// the signal under which both endpoint actions have positive probability.
struct EdgeWitness {
  std::vector<int> others;  // actions of players != deviator, in player order
  int decoder;
  int signal;
};

/// Confusability graph of one player's actions: two actions are adjacent
/// when some other player's signal cannot separate them against some
/// opponents' profile in the support.
struct ConfusabilityGraph {
  int deviator = -1;
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;                // u < v
  std::vector<std::vector<EdgeWitness>> edge_witnesses;  // parallel to edges
  std::vector<std::vector<char>> adjacency;

  bool adjacent(int u, int v) const { return adjacency[u][v] != 0; }
};

/// Proper coloring with colors 0..color_count-1, every color used.
struct Coloring {
  std::vector<int> color_of;
  int color_count = 0;
  bool exact = true;  // false when the solver fell back to the greedy bound
};

/// Builds the graph for `deviator`. Opponent profiles range over the
/// support of the others' product distribution (probability > support_cutoff);
/// "positive probability" on signals means > positivity_cutoff.
/// Decoders k == deviator are skipped: they know their own actions.
ConfusabilityGraph build_confusability_graph(const StageGame& game,
                                             const MonitoringStructure& m,
                                             const ProductDistribution& pstar,
                                             int deviator,
                                             double support_cutoff = 1e-12,
                                             double positivity_cutoff = 1e-12);

/// Greedy DSATUR coloring; deterministic tie-breaks (lowest vertex,
/// lowest color). Always proper; color count is an upper bound.
Coloring greedy_coloring(const ConfusabilityGraph& g);

/// Exact maximum clique size (branch and bound); valid lower bound on the
/// chromatic number.
int max_clique_size(const ConfusabilityGraph& g);

/// Minimal proper coloring. Exact (branch and bound between the clique
/// lower bound and the DSATUR upper bound) for up to `exact_vertex_budget`
/// vertices; beyond that returns the greedy coloring flagged inexact.
Coloring minimal_coloring(const ConfusabilityGraph& g,
                          int exact_vertex_budget = 24);

}  // namespace relaymon

#endif
