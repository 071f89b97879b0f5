#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "nge/graph.hpp"

using namespace nge;

namespace {

AssemblyGraph path_graph(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, 1.0});
  }
  return AssemblyGraph::build(n, edges);
}

}  // namespace

TEST_CASE("build validates endpoints, self-loops and duplicates") {
  CHECK_THROWS_AS(AssemblyGraph::build(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(AssemblyGraph::build(2, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(AssemblyGraph::build(3, {{0, 1, 1.0}, {0, 1, 0.5}}),
                  std::invalid_argument);
  CHECK_NOTHROW(AssemblyGraph::build(0, {}));
}

TEST_CASE("adjacency is sorted and degrees are consistent") {
  auto g = AssemblyGraph::build(
      5, {{3, 1, 0.1}, {0, 4, 0.2}, {0, 1, 0.3}, {0, 2, 0.4}, {2, 1, 0.5}});
  auto out0 = g.out_neighbors(0);
  REQUIRE(out0.size() == 3);
  CHECK(out0[0] == 1);
  CHECK(out0[1] == 2);
  CHECK(out0[2] == 4);
  auto in1 = g.in_neighbors(1);
  REQUIRE(in1.size() == 3);
  CHECK(in1[0] == 0);
  CHECK(in1[1] == 2);
  CHECK(in1[2] == 3);
  CHECK(g.out_degree(0) == 3);
  CHECK(g.in_degree(1) == 3);
  CHECK(g.in_degree(0) == 0);
  CHECK(g.out_degree(4) == 0);
  CHECK_THROWS_AS(g.out_neighbors(5), std::out_of_range);

  // edges() is sorted by (src, dst)
  const auto& es = g.edges();
  for (std::size_t i = 1; i < es.size(); ++i) {
    CHECK(std::make_pair(es[i - 1].src, es[i - 1].dst) <
          std::make_pair(es[i].src, es[i].dst));
  }
}

TEST_CASE("has_edge and edge_feature") {
  auto g = AssemblyGraph::build(3, {{0, 1, 0.25}, {1, 2, 0.75}});
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 0));
  CHECK(g.edge_feature(1, 2) == doctest::Approx(0.75));
  CHECK_THROWS_AS(g.edge_feature(0, 2), std::invalid_argument);
}

TEST_CASE("remove_edges keeps nodes, drops edges, validates input") {
  auto g = path_graph(4);
  auto h = g.remove_edges({{1, 2}});
  CHECK(h.node_count() == 4);
  CHECK(h.edge_count() == 2);
  CHECK(h.has_edge(0, 1));
  CHECK_FALSE(h.has_edge(1, 2));
  CHECK_THROWS_AS(g.remove_edges({{2, 0}}), std::invalid_argument);
  // original untouched
  CHECK(g.edge_count() == 3);
}

TEST_CASE("remove_edges prunes annotation edge sets") {
  auto g = AssemblyGraph::build(4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0},
                                    {2, 3, 1.0}});
  GroundTruth t;
  t.transitive_edges = {{0, 2}};
  t.backbone_nodes = {0, 1, 2, 3};
  g.set_annotations(t);

  auto h = g.remove_edges({{0, 2}});
  REQUIRE(h.annotations().has_value());
  CHECK(h.annotations()->transitive_edges.empty());
  CHECK(h.annotations()->backbone_nodes == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("structural equality covers edges, features and annotations") {
  auto a = path_graph(3);
  auto b = path_graph(3);
  CHECK(a == b);
  auto c = AssemblyGraph::build(3, {{0, 1, 1.0}, {1, 2, 0.5}});
  CHECK_FALSE(a == c);
  GroundTruth t;
  t.backbone_nodes = {0, 1, 2};
  b.set_annotations(t);
  CHECK_FALSE(a == b);
}
