#include "nge/synthgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nge/rng.hpp"

namespace nge::synthgen {

namespace {

// The last kTailGuard backbone nodes stay structure-free so the dead-end
// walk from the backbone tail always exceeds the default tip bound (10)
// before meeting a junction; the tail is genome, not artifact.
constexpr std::uint32_t kTailGuard = 11;

enum class Kind { transitive, tip, bubble };

struct Plan {
  Kind kind;
  std::uint32_t span;          // consecutive backbone nodes occupied
  std::uint32_t anchor = 0;    // first backbone node of the span
  // tips
  std::uint32_t tip_len = 0;
  bool dead_start = false;
  // bubbles
  std::uint32_t arm_len = 0;       // planted internal nodes
  std::uint32_t backbone_len = 0;  // backbone internal nodes (>= arm_len)
  bool external = false;
  std::uint32_t external_index = 0;  // which arm node gets the 2-cycle
};

std::uint32_t draw_range(SplitMix64& rng,
                         std::pair<std::uint32_t, std::uint32_t> range) {
  if (range.first > range.second) {
    throw std::invalid_argument("empty structure length range");
  }
  return range.first +
         static_cast<std::uint32_t>(rng.next_below(range.second - range.first + 1));
}

}  // namespace

GenSpec GenSpec::isolated(Algorithm alg, std::uint32_t backbone_len,
                          std::uint32_t scale, std::uint64_t seed) {
  GenSpec s;
  s.backbone_len = backbone_len;
  s.scale = scale;
  s.seed = seed;
  std::uint32_t total = s.total_backbone() / 10;
  switch (alg) {
    case Algorithm::transitive: s.n_transitive = total; break;
    case Algorithm::tips: s.n_tips = total; break;
    case Algorithm::bubbles: s.n_bubbles = total; break;
  }
  return s;
}

GenSpec GenSpec::parallel(std::uint32_t backbone_len, std::uint32_t scale,
                          std::uint64_t seed) {
  GenSpec s;
  s.backbone_len = backbone_len;
  s.scale = scale;
  s.seed = seed;
  std::uint32_t total = s.total_backbone() / 10;
  std::uint32_t base = total / 3;
  std::uint32_t rem = total % 3;
  s.n_transitive = base + (rem > 0 ? 1 : 0);
  s.n_tips = base + (rem > 1 ? 1 : 0);
  s.n_bubbles = base;
  return s;
}

std::pair<AssemblyGraph, GroundTruth> generate(const GenSpec& spec) {
  const std::uint32_t L = spec.total_backbone();
  if (L < 2) {
    throw std::invalid_argument("backbone_len * scale must be >= 2");
  }
  // planted sizes must sit strictly under the default simplification
  // bounds (tips <= 10, bubble arms <= 10 including the longer backbone
  // arm), otherwise ground truth would depend on the thresholds
  if (spec.n_tips > 0 &&
      (spec.tip_len_range.first < 1 || spec.tip_len_range.second > 10)) {
    throw std::invalid_argument("tip_len_range must lie within [1, 10]");
  }
  if (spec.n_bubbles > 0 && (spec.bubble_len_range.first < 2 ||
                             spec.bubble_len_range.second > 9)) {
    throw std::invalid_argument("bubble_len_range must lie within [2, 9]");
  }
  SplitMix64 rng(spec.seed);

  const std::uint32_t available = L > kTailGuard ? L - kTailGuard : 0;

  // Draw structure shapes and pack them onto disjoint anchor spans; sizes
  // are random, so re-draw on an unlucky overshoot. A failure with minimal
  // sizes is a genuine infeasibility.
  std::uint32_t min_span_sum = 3 * spec.n_transitive + 1 * spec.n_tips +
                               (spec.bubble_len_range.first + 2) * spec.n_bubbles;
  if (min_span_sum > available) {
    throw std::invalid_argument(
        "anchor packing infeasible: need " + std::to_string(min_span_sum) +
        " backbone positions, have " + std::to_string(available));
  }

  std::vector<Plan> plans;
  for (int attempt = 0;; ++attempt) {
    plans.clear();
    for (std::uint32_t i = 0; i < spec.n_transitive; ++i) {
      plans.push_back({Kind::transitive, 3});
    }
    for (std::uint32_t i = 0; i < spec.n_tips; ++i) {
      Plan p{Kind::tip, 1};
      p.tip_len = draw_range(rng, spec.tip_len_range);
      p.dead_start = rng.next_unit() < 0.5;
      plans.push_back(p);
    }
    for (std::uint32_t i = 0; i < spec.n_bubbles; ++i) {
      Plan p{Kind::bubble, 0};
      p.arm_len = draw_range(rng, spec.bubble_len_range);
      p.backbone_len = p.arm_len + static_cast<std::uint32_t>(rng.next_below(2));
      p.span = p.backbone_len + 2;
      p.external = rng.next_unit() < spec.external_edge_prob;
      p.external_index = static_cast<std::uint32_t>(rng.next_below(p.arm_len));
      plans.push_back(p);
    }

    std::uint32_t span_sum = 0;
    for (const Plan& p : plans) span_sum += p.span;
    if (span_sum <= available) {
      // random order, then left-to-right placement with random gaps
      for (std::size_t i = plans.size(); i > 1; --i) {
        std::swap(plans[i - 1], plans[rng.next_below(i)]);
      }
      std::uint32_t slack = available - span_sum;
      std::uint32_t cursor = 0;
      for (Plan& p : plans) {
        std::uint32_t gap = static_cast<std::uint32_t>(rng.next_below(slack + 1));
        slack -= gap;
        cursor += gap;
        p.anchor = cursor;
        cursor += p.span;
      }
      break;
    }
    if (attempt >= 200) {
      throw std::invalid_argument(
          "anchor packing infeasible: need " + std::to_string(span_sum) +
          " backbone positions, have " + std::to_string(available));
    }
  }

  std::vector<Edge> edges;
  GroundTruth truth;
  truth.backbone_nodes.resize(L);
  std::iota(truth.backbone_nodes.begin(), truth.backbone_nodes.end(), 0);

  auto feature = [&rng] { return rng.next_range(0.1, 1.0); };
  for (NodeId i = 0; i + 1 < L; ++i) {
    edges.push_back({i, i + 1, feature()});
  }

  NodeId next_node = L;
  for (const Plan& p : plans) {
    const NodeId a = p.anchor;
    switch (p.kind) {
      case Kind::transitive: {
        edges.push_back({a, a + 2, feature()});
        truth.transitive_edges.insert({a, a + 2});
        break;
      }
      case Kind::tip: {
        // dead-start chains flow into the backbone and need a junction
        // there, which anchor 0 (the designated source) cannot provide
        bool dead_start = p.dead_start && a != 0;
        std::vector<NodeId> chain(p.tip_len);
        for (auto& c : chain) c = next_node++;
        NodeId prev = a;
        for (NodeId c : chain) {
          if (dead_start) {
            edges.push_back({c, prev, feature()});
            truth.tip_edges.insert({c, prev});
          } else {
            edges.push_back({prev, c, feature()});
            truth.tip_edges.insert({prev, c});
          }
          truth.tip_nodes.insert(c);
          prev = c;
        }
        break;
      }
      case Kind::bubble: {
        const NodeId sink = a + p.backbone_len + 1;
        std::vector<NodeId> arm(p.arm_len);
        for (auto& c : arm) c = next_node++;
        NodeId prev = a;
        std::vector<EdgePair> arm_edges;
        for (NodeId c : arm) {
          arm_edges.push_back({prev, c});
          prev = c;
        }
        arm_edges.push_back({prev, sink});
        for (auto [s, d] : arm_edges) {
          edges.push_back({s, d, feature()});
        }
        if (p.external) {
          NodeId x = next_node++;
          NodeId c = arm[p.external_index];
          edges.push_back({c, x, feature()});
          edges.push_back({x, c, feature()});
          // removal stops at the externally connected arm node: only the
          // prefix of the discarded path up to and into it is removable
          for (std::uint32_t i = 0; i <= p.external_index; ++i) {
            truth.bubble_removable_edges.insert(arm_edges[i]);
          }
        } else {
          truth.bubble_removable_edges.insert(arm_edges.begin(),
                                              arm_edges.end());
        }
        break;
      }
    }
  }

  auto graph = AssemblyGraph::build(next_node, std::move(edges));
  graph.set_annotations(truth);
  return {std::move(graph), std::move(truth)};
}

std::vector<std::pair<AssemblyGraph, GroundTruth>> generate_dataset(
    const GenSpec& spec, std::uint32_t count) {
  if (count < 1) {
    throw std::invalid_argument("dataset count must be >= 1");
  }
  std::vector<std::pair<AssemblyGraph, GroundTruth>> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    GenSpec sub = spec;
    sub.seed = SplitMix64::substream_seed(spec.seed, i);
    out.push_back(generate(sub));
  }
  return out;
}

}  // namespace nge::synthgen
