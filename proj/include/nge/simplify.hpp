#pragma once

#include <string>

#include "nge/graph.hpp"

namespace nge {

enum class Algorithm { transitive, tips, bubbles };

constexpr const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::transitive: return "transitive";
    case Algorithm::tips: return "tips";
    case Algorithm::bubbles: return "bubbles";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name);

struct SimplifyConfig {
  std::uint32_t max_tip_len = 10;
  std::uint32_t max_path_len = 10;
};

struct SimplificationResult {
  Algorithm algorithm;
  EdgeSet removed_edges;
  NodeSet removed_nodes;  // nonempty only for tip trimming
  AssemblyGraph retained_graph;
};

// Edges i->k that have a single-j witness path i->j->k in g. Non-cascading:
// every triplet is checked against the input edge set, so a transitive edge
// may itself act as a witness for another triplet.
EdgeSet find_transitive_edges(const AssemblyGraph& g);

SimplificationResult remove_transitive(const AssemblyGraph& g);

// Removes dead-end chains: from every node with out-degree 0, walk backwards
// along unique predecessors; if a junction (node with multiple in- or
// out-edges) is reached within max_tip_len walked nodes, the walked chain and
// its edges (including the junction's edge into the chain) go. Walks that
// exceed the bound, or never meet a junction, remove nothing. On annotated
// graphs the symmetric rule trims in-degree-0 dead starts as well, except
// the designated backbone source; unannotated graphs skip dead starts.
SimplificationResult trim_tips(const AssemblyGraph& g, std::uint32_t max_tip_len);

// Pops simple bubbles: two internally node-disjoint directed paths between a
// common source (out-degree >= 2) and sink, each with 1..max_path_len
// internal nodes. The path with more internal nodes is retained (ties break
// to the lexicographically smallest internal sequence). On the discarded
// path, edges are removed from the source up to and including the edge into
// the first internal node connected outside the bubble; the rest is kept so
// that node can still rejoin at the sink. One bubble per source per sweep
// (smallest source, then smallest sink, then lexicographically first
// disjoint path pair); sweeps repeat until a fixpoint.
SimplificationResult pop_bubbles(const AssemblyGraph& g, std::uint32_t max_path_len);

struct PipelineResult {
  SimplificationResult transitive;
  SimplificationResult tips;
  SimplificationResult bubbles;
  AssemblyGraph final_graph;
};

// Transitive removal, then tip trimming, then bubble popping.
PipelineResult simplify_pipeline_full(const AssemblyGraph& g, const SimplifyConfig& config);
AssemblyGraph simplify_pipeline(const AssemblyGraph& g, const SimplifyConfig& config);

}  // namespace nge
