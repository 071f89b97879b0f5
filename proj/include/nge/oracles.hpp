#pragma once

#include <cstdint>

#include "nge/graph.hpp"

namespace nge::oracles {

// Brute-force reference implementations used to cross-check the production
// algorithms in tests. They are written independently (exhaustive
// enumeration, no shared helpers with nge::find_transitive_edges /
// trim_tips / pop_bubbles) and are only valid on small graphs.
//
// All three throw std::invalid_argument when g.node_count() > 64.

struct TipOracleResult {
  NodeSet removed_nodes;
  EdgeSet removed_edges;
};

// Every edge (i,k) for which some single intermediate j has (i,j) and (j,k),
// found by scanning all node triples.
EdgeSet oracle_transitive(const AssemblyGraph& g);

// Exhaustively enumerates every simple directed path of at most
// max_tip_len+1 nodes and keeps those forming a dead-end tip
// (junction -> chain -> out-degree-0 node) or, when the graph carries
// annotations with a designated source, a dead-start tip
// (in-degree-0 node -> chain -> junction).
TipOracleResult oracle_tips(const AssemblyGraph& g, std::uint32_t max_tip_len);

// Enumerates all simple-path pairs between every (s,t), filters to
// internally node-disjoint pairs with 1..max_path_len internal nodes per
// path, and applies the retention + external-connectivity removal rule,
// popping the minimal (t, path-pair) bubble per source per sweep until a
// fixpoint.
EdgeSet oracle_bubbles(const AssemblyGraph& g, std::uint32_t max_path_len);

}  // namespace nge::oracles
