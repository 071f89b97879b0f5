#include "nge/simplify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace nge {

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "transitive") return Algorithm::transitive;
  if (name == "tips") return Algorithm::tips;
  if (name == "bubbles") return Algorithm::bubbles;
  throw std::invalid_argument("unknown algorithm: " + name);
}

EdgeSet find_transitive_edges(const AssemblyGraph& g) {
  EdgeSet result;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j : g.out_neighbors(i)) {
      for (NodeId k : g.out_neighbors(j)) {
        if (k != i && g.has_edge(i, k)) {
          result.insert({i, k});
        }
      }
    }
  }
  return result;
}

SimplificationResult remove_transitive(const AssemblyGraph& g) {
  SimplificationResult r;
  r.algorithm = Algorithm::transitive;
  r.removed_edges = find_transitive_edges(g);
  r.retained_graph = g.remove_edges(r.removed_edges);
  return r;
}

namespace {

bool is_junction(const AssemblyGraph& g, NodeId v) {
  return g.in_degree(v) > 1 || g.out_degree(v) > 1;
}

// One backward (from a dead end) or forward (from a dead start) tip walk.
// Fills `nodes`/`edges` and returns true only if a junction is reached
// within max_tip_len walked nodes.
bool tip_walk(const AssemblyGraph& g, NodeId start, bool backward,
              std::uint32_t max_tip_len, NodeSet& nodes, EdgeSet& edges) {
  std::vector<NodeId> walked = {start};
  NodeId cur = start;
  while (true) {
    auto next = backward ? g.in_neighbors(cur) : g.out_neighbors(cur);
    if (next.size() != 1) {
      return false;  // chain ends without a junction
    }
    NodeId n = next[0];
    if (is_junction(g, n)) {
      if (walked.size() > max_tip_len) {
        return false;
      }
      for (std::size_t i = 1; i < walked.size(); ++i) {
        edges.insert(backward ? EdgePair{walked[i], walked[i - 1]}
                              : EdgePair{walked[i - 1], walked[i]});
      }
      edges.insert(backward ? EdgePair{n, walked.back()}
                            : EdgePair{walked.back(), n});
      nodes.insert(walked.begin(), walked.end());
      return true;
    }
    walked.push_back(n);
    if (walked.size() > max_tip_len) {
      return false;
    }
    cur = n;
  }
}

}  // namespace

SimplificationResult trim_tips(const AssemblyGraph& g, std::uint32_t max_tip_len) {
  if (max_tip_len < 1) {
    throw std::invalid_argument("max_tip_len must be >= 1");
  }
  SimplificationResult r;
  r.algorithm = Algorithm::tips;

  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) == 0) {
      tip_walk(g, v, /*backward=*/true, max_tip_len, r.removed_nodes,
               r.removed_edges);
    }
  }

  // Dead starts are artifacts only when the graph has a designated source;
  // real graphs carry no annotation and keep their potential entry points.
  if (g.annotations() && !g.annotations()->backbone_nodes.empty()) {
    NodeId source = g.annotations()->backbone_nodes.front();
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v != source && g.in_degree(v) == 0) {
        tip_walk(g, v, /*backward=*/false, max_tip_len, r.removed_nodes,
                 r.removed_edges);
      }
    }
  }

  r.retained_graph = g.remove_edges(r.removed_edges);
  return r;
}

namespace {

// All directed simple paths from s with 1..max_path_len internal nodes,
// grouped by endpoint. Each recorded path is its internal node sequence.
std::map<NodeId, std::vector<std::vector<NodeId>>> bounded_paths_from(
    const AssemblyGraph& g, NodeId s, std::uint32_t max_path_len) {
  std::map<NodeId, std::vector<std::vector<NodeId>>> by_sink;
  std::vector<NodeId> path = {s};
  std::vector<char> on_path(g.node_count(), 0);
  on_path[s] = 1;

  auto dfs = [&](auto&& self, NodeId last) -> void {
    for (NodeId w : g.out_neighbors(last)) {
      if (on_path[w]) {
        continue;
      }
      if (path.size() >= 2) {
        by_sink[w].emplace_back(path.begin() + 1, path.end());
      }
      if (path.size() <= max_path_len) {
        path.push_back(w);
        on_path[w] = 1;
        self(self, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  dfs(dfs, s);
  return by_sink;
}

struct Bubble {
  NodeId source;
  NodeId sink;
  std::vector<NodeId> kept;     // internal sequence
  std::vector<NodeId> dropped;  // internal sequence
};

// Edges removed for one bubble: the discarded path's prefix up to and
// including the edge into its first internal node that touches anything
// outside the bubble, or the whole path when no such node exists.
EdgeSet bubble_removal(const AssemblyGraph& g, const Bubble& b) {
  NodeSet inside = {b.source, b.sink};
  inside.insert(b.kept.begin(), b.kept.end());
  inside.insert(b.dropped.begin(), b.dropped.end());

  std::size_t cut = b.dropped.size();  // exclusive: edges kept from here on
  for (std::size_t i = 0; i < b.dropped.size(); ++i) {
    NodeId v = b.dropped[i];
    auto external = [&](std::span<const NodeId> nbrs) {
      return std::any_of(nbrs.begin(), nbrs.end(),
                         [&](NodeId u) { return !inside.count(u); });
    };
    if (external(g.in_neighbors(v)) || external(g.out_neighbors(v))) {
      cut = i;
      break;
    }
  }

  EdgeSet removed;
  NodeId prev = b.source;
  for (std::size_t i = 0; i < b.dropped.size() && i <= cut; ++i) {
    removed.insert({prev, b.dropped[i]});
    prev = b.dropped[i];
  }
  if (cut == b.dropped.size()) {
    removed.insert({prev, b.sink});  // fully removable path
  }
  return removed;
}

// First bubble at source s: smallest sink, then the lexicographically first
// internally disjoint pair of candidate paths.
std::optional<Bubble> find_bubble_at(const AssemblyGraph& g, NodeId s,
                                     std::uint32_t max_path_len) {
  auto by_sink = bounded_paths_from(g, s, max_path_len);
  for (auto& [t, paths] : by_sink) {
    if (paths.size() < 2) {
      continue;
    }
    std::sort(paths.begin(), paths.end());
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        bool disjoint = true;
        for (NodeId u : paths[i]) {
          if (std::find(paths[j].begin(), paths[j].end(), u) != paths[j].end()) {
            disjoint = false;
            break;
          }
        }
        if (!disjoint) {
          continue;
        }
        Bubble b;
        b.source = s;
        b.sink = t;
        // keep the path with more internal nodes; ties go to the
        // lexicographically smaller one, which is paths[i] here
        if (paths[j].size() > paths[i].size()) {
          b.kept = paths[j];
          b.dropped = paths[i];
        } else {
          b.kept = paths[i];
          b.dropped = paths[j];
        }
        return b;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

SimplificationResult pop_bubbles(const AssemblyGraph& g, std::uint32_t max_path_len) {
  if (max_path_len < 2) {
    throw std::invalid_argument("max_path_len must be >= 2");
  }
  SimplificationResult r;
  r.algorithm = Algorithm::bubbles;

  AssemblyGraph cur = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId s = 0; s < cur.node_count(); ++s) {
      if (cur.out_degree(s) < 2) {
        continue;
      }
      auto bubble = find_bubble_at(cur, s, max_path_len);
      if (!bubble) {
        continue;
      }
      EdgeSet removed = bubble_removal(cur, *bubble);
      cur = cur.remove_edges(removed);
      r.removed_edges.insert(removed.begin(), removed.end());
      changed = true;
    }
  }
  r.retained_graph = std::move(cur);
  return r;
}

PipelineResult simplify_pipeline_full(const AssemblyGraph& g,
                                      const SimplifyConfig& config) {
  PipelineResult p;
  p.transitive = remove_transitive(g);
  p.tips = trim_tips(p.transitive.retained_graph, config.max_tip_len);
  p.bubbles = pop_bubbles(p.tips.retained_graph, config.max_path_len);
  p.final_graph = p.bubbles.retained_graph;
  return p;
}

AssemblyGraph simplify_pipeline(const AssemblyGraph& g, const SimplifyConfig& config) {
  return simplify_pipeline_full(g, config).final_graph;
}

}  // namespace nge
