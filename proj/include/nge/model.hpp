#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nge/graph.hpp"
#include "nge/simplify.hpp"
#include "nge/tape.hpp"
#include "nge/tensor.hpp"
#include "nge/traces.hpp"

namespace nge::model {

using ndiff::GradTape;
using ndiff::Tensor;

inline constexpr std::size_t kDefaultLatentDim = 32;
inline constexpr std::size_t kAlgorithmCount = 3;
inline constexpr std::uint32_t kEdgeInputDim = 1;

struct Linear {
  Tensor W;  // in x out
  Tensor b;  // 1 x out
};

struct GruParams {
  Tensor Wz, bz;  // update gate, [2K -> K]
  Tensor Wr, br;  // reset gate
  Tensor Wn, bn;  // candidate state
};

// One executor: three per-algorithm head sets around a single physically
// shared processor (edge encoder, message net, update projection, GRU).
// Algorithms index the arrays via static_cast<std::size_t>(Algorithm).
struct ModelParams {
  std::size_t latent_dim = kDefaultLatentDim;
  std::array<Linear, kAlgorithmCount> encoder;      // (node inputs + K) -> K
  std::array<Linear, kAlgorithmCount> decoder;      // 2K -> 1
  std::array<Linear, kAlgorithmCount> termination;  // K -> 1
  Linear edge_encoder;  // edge feature -> K
  Linear message_net;   // [z_src, z_dst, e] (3K) -> K
  Linear update_proj;   // aggregated message K -> K, feeds the GRU
  GruParams gru;

  // Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer, drawn from
  // one SplitMix64 stream in named_tensors() order.
  static ModelParams init(std::size_t latent_dim, std::uint64_t seed);

  // Stable (name, tensor) enumeration: per-algorithm heads first, then the
  // shared processor block last and contiguous. Checkpoints and parameter
  // initialization both follow this order.
  std::vector<std::pair<std::string, Tensor*>> named_tensors();
  std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;

  // Parameters touched when training `alg`: its three heads plus the shared
  // processor.
  std::vector<Tensor*> trainable(Algorithm alg);

  // The shared processor tensors only, in checkpoint order.
  std::vector<Tensor*> processor_tensors();
  std::vector<const Tensor*> processor_tensors() const;

  std::vector<Tensor*> all_tensors();
};

// Edge arrays of a graph in the model's layout: row e of `features`
// corresponds to edges()[e], sorted by (src, dst).
struct GraphTensors {
  std::vector<std::uint32_t> sources;
  std::vector<std::uint32_t> dests;
  Tensor features;  // E x 1
  std::uint32_t node_count = 0;

  static GraphTensors from_graph(const AssemblyGraph& g);
};

// Handles produced by one encode-process-decode step on a caller's tape.
struct StepValues {
  GradTape::Value logits;     // V x 1
  GradTape::Value tau_logit;  // 1 x 1, termination before the sigmoid
  GradTape::Value h_next;     // V x K
};

// One executor step: z = encoder(x, h_prev); per-edge messages from
// [z_src, z_dst, encoded feature]; per-node max aggregation; linear
// projection; GRU state update; per-node decode and termination readout.
// x is V x kNodeInputDim, h_prev is V x latent_dim. Throws
// std::invalid_argument on an empty graph or mismatched shapes.
StepValues forward_step(GradTape& tape, ModelParams& params, Algorithm alg,
                        const GraphTensors& gt, GradTape::Value x,
                        GradTape::Value h_prev);

struct TeacherStep {
  StepValues values;
  GradTape::Value loss;  // node BCE + termination BCE, 1 x 1
};

// Teacher-forced step t (1-based): inputs from the trace's previous step,
// loss against step t's reached bits and continue flag.
TeacherStep step_teacher_forced(GradTape& tape, ModelParams& params,
                                const GraphTensors& gt,
                                const traces::ExecutionTrace& trace,
                                std::uint32_t t, GradTape::Value h_prev);

// Thresholded node predictions: logit >= 0 (sigmoid >= 0.5) reads as reached.
std::vector<std::uint8_t> threshold_logits(const Tensor& logits);

// Free-running inference from the given step-1 state: the model consumes its
// own thresholded predictions, carries its latent state, and stops once the
// termination head drops below 0.5 or after max_steps. Every emitted step's
// continue_flag records the termination decision. max_steps must be >= 1;
// |V| + 1 is the conventional safety cap.
std::vector<traces::StepState> rollout(ModelParams& params, Algorithm alg,
                                       const AssemblyGraph& g,
                                       const std::vector<std::uint8_t>& is_source,
                                       std::size_t max_steps);

}  // namespace nge::model
