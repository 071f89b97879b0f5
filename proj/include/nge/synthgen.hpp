#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nge/graph.hpp"
#include "nge/simplify.hpp"

namespace nge::synthgen {

// Recipe for one synthetic assembly graph: a backbone path of
// backbone_len * scale nodes with planted transitive chords, tips and
// bubbles at non-overlapping backbone anchors, plus exact ground truth.
struct GenSpec {
  std::uint32_t backbone_len = 50;
  std::uint32_t scale = 1;
  std::uint32_t n_transitive = 0;
  std::uint32_t n_tips = 0;
  std::uint32_t n_bubbles = 0;
  std::pair<std::uint32_t, std::uint32_t> tip_len_range = {1, 4};
  std::pair<std::uint32_t, std::uint32_t> bubble_len_range = {2, 5};
  double external_edge_prob = 0.25;
  std::uint64_t seed = 0;

  std::uint32_t total_backbone() const { return backbone_len * scale; }

  // Density presets: ~1 structure per 10 backbone nodes. Isolated datasets
  // plant only one structure type; parallel datasets split the budget
  // across all three (remainder given to the earlier types).
  static GenSpec isolated(Algorithm alg, std::uint32_t backbone_len,
                          std::uint32_t scale, std::uint64_t seed);
  static GenSpec parallel(std::uint32_t backbone_len, std::uint32_t scale,
                          std::uint64_t seed);
};

// Deterministically expands a GenSpec into (graph, ground truth). The
// returned graph also carries the ground truth as annotations. Throws
// std::invalid_argument when the structures cannot be packed onto the
// backbone (message reports required vs available anchor positions).
std::pair<AssemblyGraph, GroundTruth> generate(const GenSpec& spec);

// count graphs with per-graph seeds substreamed from spec.seed.
std::vector<std::pair<AssemblyGraph, GroundTruth>> generate_dataset(
    const GenSpec& spec, std::uint32_t count);

}  // namespace nge::synthgen
