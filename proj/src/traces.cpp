#include "nge/traces.hpp"

#include <stdexcept>

namespace nge::traces {

const EdgeSet& removal_set(const GroundTruth& truth, Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::transitive: return truth.transitive_edges;
    case Algorithm::tips: return truth.tip_edges;
    case Algorithm::bubbles: return truth.bubble_removable_edges;
  }
  throw std::invalid_argument("unknown algorithm");
}

ExecutionTrace build_trace(const AssemblyGraph& g, const GroundTruth& truth,
                           Algorithm algorithm) {
  AssemblyGraph kept = g.remove_edges(removal_set(truth, algorithm));
  const NodeId n = g.node_count();

  ExecutionTrace trace;
  trace.algorithm = algorithm;
  trace.is_source.assign(n, 0);
  if (!truth.backbone_nodes.empty()) {
    trace.is_source[truth.backbone_nodes.front()] = 1;
  } else {
    for (NodeId v = 0; v < n; ++v) {
      if (kept.in_degree(v) == 0) {
        trace.is_source[v] = 1;
      }
    }
  }

  StepState cur;
  cur.reached = trace.is_source;
  bool any_source = false;
  for (auto b : cur.reached) any_source |= (b != 0);
  if (!any_source) {
    throw std::invalid_argument("graph has no traversal source");
  }
  trace.steps.push_back(cur);

  while (true) {
    StepState next = trace.steps.back();
    bool changed = false;
    for (NodeId v = 0; v < n; ++v) {
      if (!trace.steps.back().reached[v]) {
        continue;
      }
      for (NodeId w : kept.out_neighbors(v)) {
        if (!next.reached[w]) {
          next.reached[w] = 1;
          changed = true;
        }
      }
    }
    if (!changed) {
      break;
    }
    trace.steps.push_back(next);
  }
  trace.steps.back().continue_flag = 0;
  return trace;
}

std::vector<double> teacher_inputs(const ExecutionTrace& trace, std::uint32_t t) {
  if (t < 1 || t > trace.length()) {
    throw std::out_of_range("trace step out of range: " + std::to_string(t));
  }
  // for t = 1 the previous state equals the initial source indicator,
  // which is exactly steps[0]
  const auto& prev = trace.steps[t >= 2 ? t - 2 : 0].reached;
  std::vector<double> x;
  x.reserve(prev.size() * kNodeInputDim);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    x.push_back(static_cast<double>(prev[i]));
    x.push_back(static_cast<double>(trace.is_source[i]));
  }
  return x;
}

}  // namespace nge::traces
