#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nge {

// Dense node index, stable under edge removal.
using NodeId = std::uint32_t;

// Ordered (src, dst) pair; the key type for edge sets.
using EdgePair = std::pair<NodeId, NodeId>;
using EdgeSet = std::set<EdgePair>;
using NodeSet = std::set<NodeId>;

struct Edge {
  NodeId src;
  NodeId dst;
  double feature;  // overlap weight, time-invariant

  bool operator==(const Edge&) const = default;
};

// Planted-structure annotations carried by synthetic graphs. The four
// removal sets are exactly what the deterministic simplifiers remove;
// backbone_nodes is the planted path, its head being the designated
// traversal source.
struct GroundTruth {
  EdgeSet transitive_edges;
  NodeSet tip_nodes;
  EdgeSet tip_edges;
  EdgeSet bubble_removable_edges;
  std::vector<NodeId> backbone_nodes;

  bool operator==(const GroundTruth&) const = default;
};

// Immutable directed graph of reads (nodes) and overlaps (edges).
// No self-loops, at most one edge per ordered pair. Mutating operations
// return new graphs; node identities never change.
class AssemblyGraph {
 public:
  AssemblyGraph() = default;

  // Validates and builds adjacency. Edges are stored sorted by (src, dst).
  // Throws std::invalid_argument on out-of-range endpoints, self-loops or
  // duplicate ordered pairs.
  static AssemblyGraph build(NodeId node_count, std::vector<Edge> edges);

  NodeId node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Neighbor lists in ascending NodeId order. v is range-checked.
  std::span<const NodeId> out_neighbors(NodeId v) const;
  std::span<const NodeId> in_neighbors(NodeId v) const;
  std::uint32_t out_degree(NodeId v) const;
  std::uint32_t in_degree(NodeId v) const;

  bool has_edge(NodeId src, NodeId dst) const;
  // Feature of an existing edge; throws if absent.
  double edge_feature(NodeId src, NodeId dst) const;

  // New graph with `removed` dropped. Node count and ids are unchanged.
  // Throws if any removed edge is not present. Annotations are carried
  // over with their edge sets pruned to the surviving edges, so the
  // ground-truth invariants keep holding along a simplification pipeline.
  AssemblyGraph remove_edges(const EdgeSet& removed) const;

  const std::optional<GroundTruth>& annotations() const { return annotations_; }
  void set_annotations(GroundTruth truth) { annotations_ = std::move(truth); }
  void clear_annotations() { annotations_.reset(); }

  // Structural equality: node count, edge list with features, annotations.
  bool operator==(const AssemblyGraph& other) const;

 private:
  NodeId node_count_ = 0;
  std::vector<Edge> edges_;                   // sorted by (src, dst)
  std::vector<std::vector<NodeId>> out_adj_;  // ascending
  std::vector<std::vector<NodeId>> in_adj_;   // ascending
  std::optional<GroundTruth> annotations_;

  void check_node(NodeId v) const;
};

std::string edge_to_string(NodeId src, NodeId dst);

}  // namespace nge
