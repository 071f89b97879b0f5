#pragma once

#include <cstdint>
#include <vector>

#include "nge/graph.hpp"
#include "nge/simplify.hpp"

namespace nge::traces {

// One step of the target traversal: per-node reached bits plus the
// continue flag (1 everywhere except the final step).
struct StepState {
  std::vector<std::uint8_t> reached;
  std::uint8_t continue_flag = 1;

  bool operator==(const StepState&) const = default;
};

// Teacher-forcing supervision for one (graph, algorithm) pair: the parallel
// BFS over the simplified graph, recorded step by step, while the model is
// shown the full graph. steps.size() == T >= 1.
struct ExecutionTrace {
  Algorithm algorithm = Algorithm::transitive;
  std::vector<StepState> steps;
  std::vector<std::uint8_t> is_source;

  std::uint32_t length() const { return static_cast<std::uint32_t>(steps.size()); }

  bool operator==(const ExecutionTrace&) const = default;
};

// Builds the trace: KEPT = g minus the algorithm's ground-truth removal
// set; sources are the backbone head when truth designates one, otherwise
// every node with in-degree 0 in KEPT; each step adds all KEPT-successors
// of reached nodes until the fixpoint. Throws std::invalid_argument when
// no source exists or the removal set is inconsistent with g.
ExecutionTrace build_trace(const AssemblyGraph& g, const GroundTruth& truth,
                           Algorithm algorithm);

// Node inputs for step t (1-based): x_i = [previous reached bit, is_source].
// For t = 1 the previous state is the initial source indicator. Row-major
// |V| x 2. Throws std::out_of_range for t outside [1, T].
std::vector<double> teacher_inputs(const ExecutionTrace& trace, std::uint32_t t);

constexpr std::uint32_t kNodeInputDim = 2;

// The algorithm's ground-truth removal edge set.
const EdgeSet& removal_set(const GroundTruth& truth, Algorithm algorithm);

}  // namespace nge::traces
