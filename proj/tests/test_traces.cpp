#include <doctest.h>

#include <stdexcept>

#include "nge/synthgen.hpp"
#include "nge/traces.hpp"

using namespace nge;
using traces::build_trace;
using traces::teacher_inputs;

namespace {

AssemblyGraph make(NodeId n, std::vector<EdgePair> pairs) {
  std::vector<Edge> edges;
  for (auto [s, d] : pairs) {
    edges.push_back({s, d, 1.0});
  }
  return AssemblyGraph::build(n, edges);
}

GroundTruth backbone_truth(std::vector<NodeId> nodes) {
  GroundTruth t;
  t.backbone_nodes = std::move(nodes);
  return t;
}

}  // namespace

TEST_CASE("BFS trace of a 3-node path") {
  auto g = make(3, {{0, 1}, {1, 2}});
  auto trace = build_trace(g, backbone_truth({0, 1, 2}), Algorithm::transitive);
  REQUIRE(trace.length() == 3);
  CHECK(trace.steps[0].reached == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(trace.steps[1].reached == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(trace.steps[2].reached == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(trace.steps[0].continue_flag == 1);
  CHECK(trace.steps[1].continue_flag == 1);
  CHECK(trace.steps[2].continue_flag == 0);
}

TEST_CASE("transitive edges are barred from the traversal") {
  auto g = make(3, {{0, 1}, {1, 2}, {0, 2}});
  GroundTruth truth = backbone_truth({0, 1, 2});
  truth.transitive_edges = {{0, 2}};
  auto trace = build_trace(g, truth, Algorithm::transitive);
  REQUIRE(trace.length() == 3);
  CHECK(trace.steps[1].reached[2] == 0);  // not reached at step 2
  CHECK(trace.steps[2].reached[2] == 1);  // reached at step 3

  // without the barred edge the same graph converges one step earlier
  auto plain = build_trace(g, backbone_truth({0, 1, 2}), Algorithm::transitive);
  CHECK(plain.length() == 2);
  CHECK(plain.steps[1].reached[2] == 1);
}

TEST_CASE("tip nodes are never reached in the tips trace") {
  auto g = make(4, {{0, 1}, {1, 2}, {1, 3}});
  GroundTruth truth = backbone_truth({0, 1, 2});
  truth.tip_nodes = {3};
  truth.tip_edges = {{1, 3}};
  auto trace = build_trace(g, truth, Algorithm::tips);
  REQUIRE(trace.length() == 3);
  for (const auto& step : trace.steps) {
    CHECK(step.reached[3] == 0);
  }
}

TEST_CASE("teacher inputs expose previous reached bit and source flag") {
  auto g = make(3, {{0, 1}, {1, 2}});
  auto trace = build_trace(g, backbone_truth({0, 1, 2}), Algorithm::transitive);
  CHECK(teacher_inputs(trace, 2) ==
        std::vector<double>{1, 1, 0, 0, 0, 0});
  CHECK(teacher_inputs(trace, 3) ==
        std::vector<double>{1, 1, 1, 0, 0, 0});
  // at t=1 the previous state is the source indicator itself
  CHECK(teacher_inputs(trace, 1) ==
        std::vector<double>{1, 1, 0, 0, 0, 0});
  CHECK_THROWS_AS(teacher_inputs(trace, 0), std::out_of_range);
  CHECK_THROWS_AS(teacher_inputs(trace, 4), std::out_of_range);
}

TEST_CASE("graphs without annotations use all dead-start nodes as sources") {
  auto g = make(3, {{0, 1}, {2, 1}});
  auto trace = build_trace(g, GroundTruth{}, Algorithm::transitive);
  CHECK(trace.is_source == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(trace.steps[0].reached == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(trace.length() == 2);
}

TEST_CASE("a sourceless graph is not traceable") {
  auto g = make(2, {{0, 1}, {1, 0}});
  CHECK_THROWS_AS(build_trace(g, GroundTruth{}, Algorithm::transitive),
                  std::invalid_argument);
}

TEST_CASE("reached sets grow strictly until the fixpoint") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [g, truth] = synthgen::generate(synthgen::GenSpec::parallel(50, 1, seed));
    for (auto alg :
         {Algorithm::transitive, Algorithm::tips, Algorithm::bubbles}) {
      auto trace = build_trace(g, truth, alg);
      CAPTURE(seed);
      CAPTURE(static_cast<int>(alg));
      CHECK(trace.length() <= g.node_count() + 1);
      std::size_t prev = 0;
      for (std::size_t t = 0; t < trace.length(); ++t) {
        std::size_t count = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
          // monotone: nothing un-reaches
          if (t > 0) {
            CHECK(trace.steps[t].reached[v] >= trace.steps[t - 1].reached[v]);
          }
          count += trace.steps[t].reached[v];
        }
        if (t > 0) {
          CHECK(count > prev);
        }
        prev = count;
      }
      // tip exclusion
      if (alg == Algorithm::tips) {
        for (NodeId v : truth.tip_nodes) {
          CHECK(trace.steps.back().reached[v] == 0);
        }
      }
    }
  }
}

TEST_CASE("planted structures change the trace versus a plain BFS") {
  for (auto alg :
       {Algorithm::transitive, Algorithm::tips, Algorithm::bubbles}) {
    auto spec = synthgen::GenSpec::isolated(alg, 50, 1, 77);
    auto [g, truth] = synthgen::generate(spec);
    auto constrained = build_trace(g, truth, alg);
    GroundTruth unconstrained = backbone_truth(truth.backbone_nodes);
    auto plain = build_trace(g, unconstrained, alg);
    CHECK(constrained.steps != plain.steps);
  }
}
