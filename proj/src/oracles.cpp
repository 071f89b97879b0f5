#include "nge/oracles.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nge::oracles {

namespace {

void check_size(const AssemblyGraph& g) {
  if (g.node_count() > 64) {
    throw std::invalid_argument("oracles accept at most 64 nodes");
  }
}

// Every simple directed path with node count in [2, max_nodes], as explicit
// node sequences, optionally restricted to one start node. Exponential;
// fine for oracle-sized graphs.
std::vector<std::vector<NodeId>> all_simple_paths(
    const AssemblyGraph& g, std::size_t max_nodes,
    std::optional<NodeId> start = std::nullopt) {
  std::vector<std::vector<NodeId>> result;
  std::vector<NodeId> stack;
  auto extend = [&](auto&& self, NodeId v) -> void {
    stack.push_back(v);
    if (stack.size() >= 2) {
      result.push_back(stack);
    }
    if (stack.size() < max_nodes) {
      for (NodeId w : g.out_neighbors(v)) {
        if (std::find(stack.begin(), stack.end(), w) == stack.end()) {
          self(self, w);
        }
      }
    }
    stack.pop_back();
  };
  if (start) {
    extend(extend, *start);
  } else {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      extend(extend, v);
    }
  }
  return result;
}

}  // namespace

EdgeSet oracle_transitive(const AssemblyGraph& g) {
  check_size(g);
  EdgeSet result;
  const NodeId n = g.node_count();
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      for (NodeId k = 0; k < n; ++k) {
        if (g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k)) {
          result.insert({i, k});
        }
      }
    }
  }
  return result;
}

TipOracleResult oracle_tips(const AssemblyGraph& g, std::uint32_t max_tip_len) {
  check_size(g);
  TipOracleResult r;
  auto junction = [&](NodeId v) {
    return g.in_degree(v) > 1 || g.out_degree(v) > 1;
  };

  std::optional<NodeId> source;
  if (g.annotations() && !g.annotations()->backbone_nodes.empty()) {
    source = g.annotations()->backbone_nodes.front();
  }

  for (const auto& path : all_simple_paths(g, max_tip_len + 1)) {
    const std::size_t k = path.size() - 1;  // chain length beside the junction

    // Dead-end tip: path = junction, w1, ..., wk with out_degree(wk) == 0,
    // every wi having exactly one predecessor and (except wk) one successor.
    bool dead_end = junction(path[0]) && g.out_degree(path.back()) == 0;
    for (std::size_t i = 1; dead_end && i <= k; ++i) {
      dead_end = g.in_degree(path[i]) == 1 &&
                 (i == k || g.out_degree(path[i]) == 1);
    }
    // Dead-start tip (annotated graphs only): path = w1, ..., wk, junction
    // with in_degree(w1) == 0 and w1 not the designated source.
    bool dead_start = source.has_value() && junction(path.back()) &&
                      g.in_degree(path[0]) == 0 && path[0] != *source;
    for (std::size_t i = 0; dead_start && i < k; ++i) {
      dead_start = g.out_degree(path[i]) == 1 &&
                   (i == 0 || g.in_degree(path[i]) == 1);
    }

    if (dead_end || dead_start) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        r.removed_edges.insert({path[i], path[i + 1]});
      }
      std::size_t lo = dead_end ? 1 : 0;
      std::size_t hi = dead_end ? path.size() : path.size() - 1;
      for (std::size_t i = lo; i < hi; ++i) {
        r.removed_nodes.insert(path[i]);
      }
    }
  }
  return r;
}

namespace {

using Internals = std::vector<NodeId>;

struct OracleBubble {
  NodeId sink;
  Internals first;   // lexicographically smaller internal sequence
  Internals second;  // the other one
};

// Minimal (sink, pair) bubble rooted at s in the current graph, or nullopt.
std::optional<OracleBubble> min_bubble_at(const AssemblyGraph& g, NodeId s,
                                          std::uint32_t max_path_len) {
  // (sink, internals) of every simple path from s with >= 1 internal node.
  std::vector<std::pair<NodeId, Internals>> candidates;
  for (const auto& path : all_simple_paths(g, max_path_len + 2, s)) {
    if (path.size() >= 3) {
      candidates.emplace_back(path.back(),
                              Internals(path.begin() + 1, path.end() - 1));
    }
  }

  std::optional<OracleBubble> best;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      if (candidates[a].first != candidates[b].first) {
        continue;
      }
      const Internals& pa = candidates[a].second;
      const Internals& pb = candidates[b].second;
      bool disjoint = true;
      for (NodeId u : pa) {
        disjoint = disjoint &&
                   std::find(pb.begin(), pb.end(), u) == pb.end();
      }
      if (!disjoint) {
        continue;
      }
      OracleBubble cand{candidates[a].first, std::min(pa, pb),
                        std::max(pa, pb)};
      auto key = [](const OracleBubble& x) {
        return std::tie(x.sink, x.first, x.second);
      };
      if (!best || key(cand) < key(*best)) {
        best = std::move(cand);
      }
    }
  }
  return best;
}

}  // namespace

EdgeSet oracle_bubbles(const AssemblyGraph& g, std::uint32_t max_path_len) {
  check_size(g);
  EdgeSet removed_total;
  AssemblyGraph cur = g;

  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId s = 0; s < cur.node_count(); ++s) {
      auto bubble = min_bubble_at(cur, s, max_path_len);
      if (!bubble) {
        continue;
      }
      // Retention: more internal nodes wins, ties keep the smaller sequence.
      const Internals& dropped =
          bubble->second.size() > bubble->first.size() ? bubble->first
                                                       : bubble->second;
      const Internals& kept =
          (&dropped == &bubble->first) ? bubble->second : bubble->first;

      NodeSet inside = {s, bubble->sink};
      inside.insert(kept.begin(), kept.end());
      inside.insert(dropped.begin(), dropped.end());

      std::vector<NodeId> walk = {s};
      walk.insert(walk.end(), dropped.begin(), dropped.end());
      walk.push_back(bubble->sink);

      EdgeSet removed;
      for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        removed.insert({walk[i], walk[i + 1]});
        NodeId v = walk[i + 1];
        if (v == bubble->sink) {
          break;
        }
        bool external = false;
        for (NodeId u : cur.in_neighbors(v)) {
          external = external || !inside.count(u);
        }
        for (NodeId u : cur.out_neighbors(v)) {
          external = external || !inside.count(u);
        }
        if (external) {
          break;  // keep this node's onward edges
        }
      }

      cur = cur.remove_edges(removed);
      removed_total.insert(removed.begin(), removed.end());
      changed = true;
    }
  }
  return removed_total;
}

}  // namespace nge::oracles
