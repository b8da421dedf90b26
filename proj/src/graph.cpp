#include "relaymon/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace relaymon {

ConfusabilityGraph build_confusability_graph(const StageGame& game,
                                             const MonitoringStructure& m,
                                             const ProductDistribution& pstar,
                                             int deviator,
                                             double support_cutoff,
                                             double positivity_cutoff) {
  const int K = game.player_count();
  if (deviator < 0 || deviator >= K)
    throw ValidationError("invalid player index");
  ConfusabilityGraph g;
  g.deviator = deviator;
  g.vertex_count = game.action_count(deviator);
  g.adjacency.assign(g.vertex_count, std::vector<char>(g.vertex_count, 0));
  std::vector<std::vector<int>> edge_index(
      g.vertex_count, std::vector<int>(g.vertex_count, -1));

  auto support = pstar.support_excluding(deviator, support_cutoff);
  std::vector<int> others_order;
  for (int k = 0; k < K; ++k)
    if (k != deviator) others_order.push_back(k);

  // Enumerate opponents' support profiles by odometer.
  std::vector<size_t> cursor(support.size(), 0);
  std::vector<int> profile(K);
  bool done = false;
  while (!done) {
    std::vector<int> others(support.size());
    for (size_t j = 0; j < support.size(); ++j)
      others[j] = support[j][cursor[j]];
    for (size_t j = 0; j < others_order.size(); ++j)
      profile[others_order[j]] = others[j];

    for (int u = 0; u < g.vertex_count; ++u) {
      for (int v = u + 1; v < g.vertex_count; ++v) {
        for (int k = 0; k < K; ++k) {
          if (k == deviator) continue;  // decoder k recalls its own actions
          profile[deviator] = u;
          size_t pu = game.profile_index(profile);
          profile[deviator] = v;
          size_t pv = game.profile_index(profile);
          for (int s = 0; s < m.signal_count(k); ++s) {
            double a = m.marginal(k, pu, s);
            double b = m.marginal(k, pv, s);
            if (std::min(a, b) > positivity_cutoff) {
              if (edge_index[u][v] < 0) {
                edge_index[u][v] = static_cast<int>(g.edges.size());
                g.adjacency[u][v] = g.adjacency[v][u] = 1;
                g.edges.emplace_back(u, v);
                g.edge_witnesses.emplace_back();
              }
              g.edge_witnesses[edge_index[u][v]].push_back({others, k, s});
            }
          }
        }
      }
    }

    // advance odometer
    done = true;
    for (size_t j = support.size(); j-- > 0;) {
      if (++cursor[j] < support[j].size()) {
        done = false;
        break;
      }
      cursor[j] = 0;
    }
  }
  return g;
}

Coloring greedy_coloring(const ConfusabilityGraph& g) {
  const int n = g.vertex_count;
  Coloring c;
  c.color_of.assign(n, -1);
  c.color_count = 0;
  c.exact = false;
  if (n == 0) return c;

  std::vector<int> degree(n, 0);
  for (auto [u, v] : g.edges) {
    degree[u]++;
    degree[v]++;
  }
  std::vector<std::vector<char>> neighbor_colors(n);
  auto saturation = [&](int v) {
    return static_cast<int>(std::count(neighbor_colors[v].begin(),
                                       neighbor_colors[v].end(),
                                       static_cast<char>(1)));
  };
  for (int step = 0; step < n; ++step) {
    int best = -1, best_sat = -1, best_deg = -1;
    for (int v = 0; v < n; ++v) {
      if (c.color_of[v] >= 0) continue;
      int s = saturation(v);
      if (s > best_sat || (s == best_sat && degree[v] > best_deg)) {
        best = v;
        best_sat = s;
        best_deg = degree[v];
      }
    }
    int col = 0;
    while (col < static_cast<int>(neighbor_colors[best].size()) &&
           neighbor_colors[best][col])
      ++col;
    c.color_of[best] = col;
    for (int u = 0; u < n; ++u) {
      if (!g.adjacent(best, u)) continue;
      if (static_cast<int>(neighbor_colors[u].size()) <= col)
        neighbor_colors[u].resize(col + 1, 0);
      neighbor_colors[u][col] = 1;
    }
  }
  c.color_count = 1 + *std::max_element(c.color_of.begin(), c.color_of.end());
  return c;
}

namespace {

void clique_extend(const ConfusabilityGraph& g, int depth,
                   std::vector<int>& candidates, int& best) {
  if (depth > best) best = depth;
  if (depth + static_cast<int>(candidates.size()) <= best) return;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (depth + static_cast<int>(candidates.size() - i) <= best) return;
    int v = candidates[i];
    std::vector<int> next;
    for (size_t j = i + 1; j < candidates.size(); ++j)
      if (g.adjacent(v, candidates[j])) next.push_back(candidates[j]);
    clique_extend(g, depth + 1, next, best);
  }
}

// Backtracking k-colorability along a fixed order; new colors are
// introduced in increasing order to break symmetry.
bool color_rec(const ConfusabilityGraph& g, const std::vector<int>& order,
               size_t pos, int k, int max_used, std::vector<int>& color) {
  if (pos == order.size()) return true;
  int v = order[pos];
  int cap = std::min(k - 1, max_used + 1);
  for (int col = 0; col <= cap; ++col) {
    bool clash = false;
    for (int u = 0; u < g.vertex_count; ++u)
      if (g.adjacent(v, u) && color[u] == col) {
        clash = true;
        break;
      }
    if (clash) continue;
    color[v] = col;
    if (color_rec(g, order, pos + 1, k, std::max(max_used, col), color))
      return true;
    color[v] = -1;
  }
  return false;
}

}  // namespace

int max_clique_size(const ConfusabilityGraph& g) {
  std::vector<int> candidates(g.vertex_count);
  for (int v = 0; v < g.vertex_count; ++v) candidates[v] = v;
  int best = 0;
  clique_extend(g, 0, candidates, best);
  return best;
}

Coloring minimal_coloring(const ConfusabilityGraph& g,
                          int exact_vertex_budget) {
  Coloring greedy = greedy_coloring(g);
  if (g.vertex_count == 0) {
    greedy.exact = true;
    return greedy;
  }
  if (g.vertex_count > exact_vertex_budget) return greedy;  // flagged inexact

  int lower = max_clique_size(g);
  int upper = greedy.color_count;
  Coloring best = greedy;
  best.exact = true;

  std::vector<int> degree(g.vertex_count, 0);
  for (auto [u, v] : g.edges) {
    degree[u]++;
    degree[v]++;
  }
  std::vector<int> order(g.vertex_count);
  for (int v = 0; v < g.vertex_count; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
  });

  for (int k = std::max(lower, 1); k < upper; ++k) {
    std::vector<int> color(g.vertex_count, -1);
    if (color_rec(g, order, 0, k, -1, color)) {
      best.color_of = std::move(color);
      best.color_count = k;
      break;
    }
  }
  // renumber in first-use order so every color 0..chi-1 is used
  std::vector<int> remap(best.color_count, -1);
  int next = 0;
  for (int& c : best.color_of) {
    if (remap[c] < 0) remap[c] = next++;
    c = remap[c];
  }
  best.color_count = next;
  return best;
}

}  // namespace relaymon
