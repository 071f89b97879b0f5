#pragma once

#include <vector>

#include "nge/graph.hpp"
#include "nge/rng.hpp"

namespace nge::testutil {

// Random sparse digraph: n in [2, max_nodes], each ordered non-loop pair
// independently present with a per-graph probability in [0.05, 0.35].
// Small and sparse enough for the exhaustive oracles.
inline AssemblyGraph random_graph(SplitMix64& rng, NodeId max_nodes) {
  NodeId n = 2 + static_cast<NodeId>(rng.next_below(max_nodes - 1));
  double p = rng.next_range(0.05, 0.35);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && rng.next_unit() < p) {
        edges.push_back({i, j, rng.next_range(0.1, 1.0)});
      }
    }
  }
  return AssemblyGraph::build(n, edges);
}

// Uniform random permutation of [0, n) via Fisher-Yates.
inline std::vector<NodeId> random_permutation(SplitMix64& rng, NodeId n) {
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) {
    perm[i] = i;
  }
  for (NodeId i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.next_below(i)]);
  }
  return perm;
}

// Relabels every node v as perm[v], keeping features. Annotations are not
// carried over.
inline AssemblyGraph permute_graph(const AssemblyGraph& g,
                                   const std::vector<NodeId>& perm) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    edges.push_back({perm[e.src], perm[e.dst], e.feature});
  }
  return AssemblyGraph::build(g.node_count(), std::move(edges));
}

}  // namespace nge::testutil
