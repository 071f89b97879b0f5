#include <doctest.h>

#include <vector>

#include "nge/graph.hpp"
#include "nge/oracles.hpp"
#include "nge/rng.hpp"
#include "nge/simplify.hpp"
#include "test_util.hpp"

using namespace nge;

namespace {

AssemblyGraph make(NodeId n, std::vector<EdgePair> pairs) {
  std::vector<Edge> edges;
  for (auto [s, d] : pairs) {
    edges.push_back({s, d, 1.0});
  }
  return AssemblyGraph::build(n, edges);
}

AssemblyGraph path_graph(NodeId n) {
  std::vector<EdgePair> pairs;
  for (NodeId i = 0; i + 1 < n; ++i) {
    pairs.push_back({i, i + 1});
  }
  return make(n, pairs);
}

}  // namespace

TEST_CASE("single triplet closure is transitive") {
  auto g = make(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(find_transitive_edges(g) == EdgeSet{{0, 2}});
}

TEST_CASE("two-hop shortcut without a single witness is not transitive") {
  auto g = make(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(find_transitive_edges(g).empty());
}

TEST_CASE("plain paths have no transitive edges") {
  CHECK(find_transitive_edges(path_graph(50)).empty());
}

TEST_CASE("transitive evaluation is non-cascading") {
  // 0->2 is transitive via 1; 1->3 is transitive via 2 even though
  // its witness edge 0->2... does not matter: 1->2->3 is the witness.
  auto g = make(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {1, 3}});
  CHECK(find_transitive_edges(g) == EdgeSet{{0, 2}, {1, 3}});
  auto r = remove_transitive(g);
  CHECK(r.removed_edges == EdgeSet{{0, 2}, {1, 3}});
  CHECK(r.removed_nodes.empty());
  CHECK(r.retained_graph.edge_count() == 3);
}

TEST_CASE("single-node dead-end tip is trimmed") {
  // with bound 1 the short backbone tail 2->3 is out of the walk's reach
  auto g = make(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}});
  auto r = trim_tips(g, 1);
  CHECK(r.removed_nodes == NodeSet{4});
  CHECK(r.removed_edges == EdgeSet{{1, 4}});
  CHECK(r.retained_graph.has_edge(1, 2));
  // node count is preserved; the tip node is merely isolated
  CHECK(r.retained_graph.node_count() == 5);
  CHECK(r.retained_graph.out_degree(4) == 0);
  CHECK(r.retained_graph.in_degree(4) == 0);
}

TEST_CASE("any dead-end chain within the bound is a tip, tails included") {
  // the two-node tail 2->3 reaches junction 1 within bound 10 and goes too
  auto g = make(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}});
  auto r = trim_tips(g, 10);
  CHECK(r.removed_nodes == NodeSet{2, 3, 4});
  CHECK(r.removed_edges == EdgeSet{{1, 2}, {2, 3}, {1, 4}});
}

TEST_CASE("long backbones keep their tail under the default bound") {
  std::vector<EdgePair> pairs;
  for (NodeId i = 0; i + 1 < 13; ++i) {
    pairs.push_back({i, i + 1});
  }
  pairs.push_back({1, 13});  // single-node tip at the junction
  auto g = make(14, pairs);
  auto r = trim_tips(g, 10);
  CHECK(r.removed_nodes == NodeSet{13});
  CHECK(r.removed_edges == EdgeSet{{1, 13}});
}

TEST_CASE("a lone path is not a tip") {
  auto r = trim_tips(path_graph(4), 10);
  CHECK(r.removed_nodes.empty());
  CHECK(r.removed_edges.empty());
}

TEST_CASE("tip walks beyond the bound remove nothing") {
  // backbone 0..5 with tip chain 1->6->7
  auto g = make(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 6}, {6, 7}});
  auto r = trim_tips(g, 1);
  CHECK(r.removed_nodes.empty());
  CHECK(r.removed_edges.empty());
  auto r2 = trim_tips(g, 2);
  CHECK(r2.removed_nodes == NodeSet{6, 7});
  CHECK(r2.removed_edges == EdgeSet{{1, 6}, {6, 7}});
}

TEST_CASE("dead starts are trimmed only on annotated graphs") {
  // 4 -> 1 is a dead start hanging off the backbone 0->1->2->3
  auto g = make(5, {{0, 1}, {1, 2}, {2, 3}, {4, 1}});

  auto plain = trim_tips(g, 1);
  CHECK(plain.removed_nodes.empty());

  GroundTruth t;
  t.backbone_nodes = {0, 1, 2, 3};
  g.set_annotations(t);
  auto annotated = trim_tips(g, 1);
  CHECK(annotated.removed_nodes == NodeSet{4});
  CHECK(annotated.removed_edges == EdgeSet{{4, 1}});
}

TEST_CASE("the designated source is never treated as a dead start") {
  auto g = make(3, {{0, 1}, {1, 2}, {0, 2}});
  GroundTruth t;
  t.backbone_nodes = {0, 1, 2};
  g.set_annotations(t);
  auto r = trim_tips(g, 10);
  CHECK(r.removed_nodes.empty());
}

TEST_CASE("fully removable bubble drops the whole discarded path") {
  auto g = make(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  auto r = pop_bubbles(g, 10);
  // equal internal lengths: the lexicographically smaller path [1] is kept
  CHECK(r.removed_edges == EdgeSet{{0, 2}, {2, 3}});
  CHECK(r.retained_graph.has_edge(0, 1));
  CHECK(r.retained_graph.has_edge(1, 3));
}

TEST_CASE("paths have no bubbles") {
  auto r = pop_bubbles(path_graph(5), 10);
  CHECK(r.removed_edges.empty());
}

TEST_CASE("externally connected internal node keeps its onward edges") {
  // Discarded path 0->1->2->3 (kept arm 0->4->5->6->3 has more internals);
  // node 2 owns the external edge 2->9, so removal stops after 1->2.
  auto g = make(10, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}, {6, 3},
                     {2, 9}});
  auto r = pop_bubbles(g, 10);
  CHECK(r.removed_edges == EdgeSet{{0, 1}, {1, 2}});
  CHECK(r.retained_graph.has_edge(2, 3));
  CHECK(r.retained_graph.has_edge(2, 9));
}

TEST_CASE("longer arm wins retention regardless of lexicographic order") {
  auto g = make(5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}});
  auto r = pop_bubbles(g, 10);
  CHECK(r.removed_edges == EdgeSet{{0, 1}, {1, 4}});
}

TEST_CASE("arms longer than max_path_len are not bubble candidates") {
  // arms [1] and [2,3,4] between 0 and 5
  auto g = make(6, {{0, 1}, {1, 5}, {0, 2}, {2, 3}, {3, 4}, {4, 5}});
  // the three-internal arm exceeds the bound: no valid pair remains
  CHECK(pop_bubbles(g, 2).removed_edges.empty());
  // once the bound admits it, it wins retention and the short arm goes
  CHECK(pop_bubbles(g, 3).removed_edges == EdgeSet{{0, 1}, {1, 5}});
}

TEST_CASE("sweeps pop chained bubbles to a fixpoint") {
  // two bubbles in series: 0..3 and 3..6
  auto g = make(7, {{0, 1}, {1, 3}, {0, 2}, {2, 3}, {3, 4}, {4, 6}, {3, 5},
                    {5, 6}});
  auto r = pop_bubbles(g, 10);
  CHECK(r.removed_edges == EdgeSet{{0, 2}, {2, 3}, {3, 5}, {5, 6}});
}

TEST_CASE("direct source-sink chords are transitive business, not bubbles") {
  auto g = make(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(pop_bubbles(g, 10).removed_edges.empty());
}

TEST_CASE("pipeline applies transitive, tips, bubbles in order") {
  // chord 0->2 (transitive), tip 3->7, bubble 3->{4,5}->6 arms... built so
  // each stage removes exactly one structure
  auto g = make(8, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 7}, {3, 4}, {4, 6},
                    {3, 5}, {5, 6}});
  auto p = simplify_pipeline_full(g, {});
  CHECK(p.transitive.removed_edges == EdgeSet{{0, 2}});
  CHECK(p.tips.removed_nodes == NodeSet{7});
  CHECK(p.bubbles.removed_edges == EdgeSet{{3, 5}, {5, 6}});
  CHECK(p.final_graph.edge_count() == 5);

  // a graph that is a single bubble passes stages 1-2 untouched
  auto b = make(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  auto q = simplify_pipeline_full(b, {});
  CHECK(q.transitive.removed_edges.empty());
  CHECK(q.tips.removed_edges.empty());
  CHECK(q.bubbles.removed_edges == EdgeSet{{0, 2}, {2, 3}});
}

TEST_CASE("transitive reduction preserves reachability on forward graphs") {
  // Non-cascading removal can disconnect mutually witnessing cycles (e.g.
  // a complete 3-cycle), so the guarantee is about acyclic overlap graphs.
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    NodeId n = 2 + static_cast<NodeId>(rng.next_below(9));
    double p = rng.next_range(0.1, 0.5);
    std::vector<Edge> forward;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (rng.next_unit() < p) {
          forward.push_back({i, j, 1.0});
        }
      }
    }
    auto g = AssemblyGraph::build(n, forward);
    auto h = remove_transitive(g).retained_graph;
    // Floyd-Warshall style closure on both graphs
    auto closure = [](const AssemblyGraph& x) {
      NodeId n = x.node_count();
      std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
      for (const auto& e : x.edges()) r[e.src][e.dst] = true;
      for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i)
          for (NodeId j = 0; j < n; ++j)
            if (r[i][k] && r[k][j]) r[i][j] = true;
      return r;
    };
    CHECK(closure(g) == closure(h));
  }
}

TEST_CASE("each algorithm matches its exhaustive oracle on random graphs") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testutil::random_graph(rng, 10);
    std::uint32_t tip_len = 1 + static_cast<std::uint32_t>(rng.next_below(5));
    std::uint32_t path_len = 2 + static_cast<std::uint32_t>(rng.next_below(4));

    CAPTURE(trial);
    CHECK(find_transitive_edges(g) == oracles::oracle_transitive(g));

    auto tips = trim_tips(g, tip_len);
    auto tips_oracle = oracles::oracle_tips(g, tip_len);
    CHECK(tips.removed_nodes == tips_oracle.removed_nodes);
    CHECK(tips.removed_edges == tips_oracle.removed_edges);

    // annotated variant exercises the symmetric dead-start rule
    auto annotated = g;
    GroundTruth truth;
    truth.backbone_nodes = {0};
    annotated.set_annotations(truth);
    auto tips2 = trim_tips(annotated, tip_len);
    auto tips2_oracle = oracles::oracle_tips(annotated, tip_len);
    CHECK(tips2.removed_nodes == tips2_oracle.removed_nodes);
    CHECK(tips2.removed_edges == tips2_oracle.removed_edges);

    auto bubbles = pop_bubbles(g, path_len);
    CHECK(bubbles.removed_edges == oracles::oracle_bubbles(g, path_len));
  }
}

TEST_CASE("each algorithm is idempotent on its own output") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testutil::random_graph(rng, 10);

    auto t1 = remove_transitive(g).retained_graph;
    CHECK(find_transitive_edges(t1).empty());

    auto b1 = pop_bubbles(g, 6).retained_graph;
    CHECK(pop_bubbles(b1, 6).removed_edges.empty());
  }
}
