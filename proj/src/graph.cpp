#include "nge/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace nge {

std::string edge_to_string(NodeId src, NodeId dst) {
  return std::to_string(src) + "->" + std::to_string(dst);
}

AssemblyGraph AssemblyGraph::build(NodeId node_count, std::vector<Edge> edges) {
  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw std::invalid_argument("edge endpoint out of range: " +
                                  edge_to_string(e.src, e.dst) + " with " +
                                  std::to_string(node_count) + " nodes");
    }
    if (e.src == e.dst) {
      throw std::invalid_argument("self-loop forbidden: " +
                                  edge_to_string(e.src, e.dst));
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::make_pair(a.src, a.dst) < std::make_pair(b.src, b.dst);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i - 1].src == edges[i].src && edges[i - 1].dst == edges[i].dst) {
      throw std::invalid_argument("duplicate edge: " +
                                  edge_to_string(edges[i].src, edges[i].dst));
    }
  }

  AssemblyGraph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);
  g.out_adj_.assign(node_count, {});
  g.in_adj_.assign(node_count, {});
  for (const Edge& e : g.edges_) {
    g.out_adj_[e.src].push_back(e.dst);  // ascending: edges_ sorted
    g.in_adj_[e.dst].push_back(e.src);
  }
  for (auto& preds : g.in_adj_) {
    std::sort(preds.begin(), preds.end());
  }
  return g;
}

void AssemblyGraph::check_node(NodeId v) const {
  if (v >= node_count_) {
    throw std::out_of_range("node out of range: " + std::to_string(v) +
                            " with " + std::to_string(node_count_) +
                            " nodes");
  }
}

std::span<const NodeId> AssemblyGraph::out_neighbors(NodeId v) const {
  check_node(v);
  return out_adj_[v];
}

std::span<const NodeId> AssemblyGraph::in_neighbors(NodeId v) const {
  check_node(v);
  return in_adj_[v];
}

std::uint32_t AssemblyGraph::out_degree(NodeId v) const {
  check_node(v);
  return static_cast<std::uint32_t>(out_adj_[v].size());
}

std::uint32_t AssemblyGraph::in_degree(NodeId v) const {
  check_node(v);
  return static_cast<std::uint32_t>(in_adj_[v].size());
}

bool AssemblyGraph::has_edge(NodeId src, NodeId dst) const {
  if (src >= node_count_ || dst >= node_count_) {
    return false;
  }
  const auto& nbrs = out_adj_[src];
  return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

double AssemblyGraph::edge_feature(NodeId src, NodeId dst) const {
  Edge probe{src, dst, 0.0};
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), probe, [](const Edge& a, const Edge& b) {
        return std::make_pair(a.src, a.dst) < std::make_pair(b.src, b.dst);
      });
  if (it == edges_.end() || it->src != src || it->dst != dst) {
    throw std::invalid_argument("edge not present: " + edge_to_string(src, dst));
  }
  return it->feature;
}

AssemblyGraph AssemblyGraph::remove_edges(const EdgeSet& removed) const {
  for (const EdgePair& e : removed) {
    if (!has_edge(e.first, e.second)) {
      throw std::invalid_argument("cannot remove missing edge: " +
                                  edge_to_string(e.first, e.second));
    }
  }
  std::vector<Edge> kept;
  kept.reserve(edges_.size() - removed.size());
  for (const Edge& e : edges_) {
    if (!removed.count({e.src, e.dst})) {
      kept.push_back(e);
    }
  }
  AssemblyGraph g = build(node_count_, std::move(kept));
  if (annotations_) {
    GroundTruth pruned = *annotations_;
    auto prune = [&g](EdgeSet& set) {
      for (auto it = set.begin(); it != set.end();) {
        it = g.has_edge(it->first, it->second) ? std::next(it) : set.erase(it);
      }
    };
    prune(pruned.transitive_edges);
    prune(pruned.tip_edges);
    prune(pruned.bubble_removable_edges);
    g.annotations_ = std::move(pruned);
  }
  return g;
}

bool AssemblyGraph::operator==(const AssemblyGraph& other) const {
  return node_count_ == other.node_count_ && edges_ == other.edges_ &&
         annotations_ == other.annotations_;
}

}  // namespace nge
