#include "nge/model.hpp"

#include <cmath>
#include <stdexcept>

#include "nge/rng.hpp"

namespace nge::model {

namespace {

Linear make_linear(std::size_t in, std::size_t out) {
  return Linear{Tensor(in, out), Tensor(1, out)};
}

void fill_uniform(SplitMix64& rng, Tensor& t, double bound) {
  for (double& v : t.data) {
    v = rng.next_range(-bound, bound);
  }
}

void init_linear(SplitMix64& rng, Linear& layer) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(layer.W.rows));
  fill_uniform(rng, layer.W, bound);
  fill_uniform(rng, layer.b, bound);
}

void init_gate(SplitMix64& rng, Tensor& W, Tensor& b) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(W.rows));
  fill_uniform(rng, W, bound);
  fill_uniform(rng, b, bound);
}

GradTape::Value linear_on(GradTape& tape, Linear& layer, GradTape::Value x) {
  return tape.add_bias(tape.matmul(x, tape.param(layer.W)),
                       tape.param(layer.b));
}

}  // namespace

ModelParams ModelParams::init(std::size_t latent_dim, std::uint64_t seed) {
  if (latent_dim == 0) {
    throw std::invalid_argument("latent_dim must be positive");
  }
  const std::size_t K = latent_dim;
  ModelParams p;
  p.latent_dim = K;
  for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
    p.encoder[a] = make_linear(traces::kNodeInputDim + K, K);
    p.decoder[a] = make_linear(2 * K, 1);
    p.termination[a] = make_linear(K, 1);
  }
  p.edge_encoder = make_linear(kEdgeInputDim, K);
  p.message_net = make_linear(3 * K, K);
  p.update_proj = make_linear(K, K);
  p.gru = GruParams{Tensor(2 * K, K), Tensor(1, K), Tensor(2 * K, K),
                    Tensor(1, K), Tensor(2 * K, K), Tensor(1, K)};

  SplitMix64 rng(seed);
  for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
    init_linear(rng, p.encoder[a]);
  }
  for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
    init_linear(rng, p.decoder[a]);
  }
  for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
    init_linear(rng, p.termination[a]);
  }
  init_linear(rng, p.edge_encoder);
  init_linear(rng, p.message_net);
  init_linear(rng, p.update_proj);
  init_gate(rng, p.gru.Wz, p.gru.bz);
  init_gate(rng, p.gru.Wr, p.gru.br);
  init_gate(rng, p.gru.Wn, p.gru.bn);
  return p;
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named_tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  auto head = [&out](const char* kind, std::array<Linear, kAlgorithmCount>& h) {
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
      const std::string base =
          std::string(kind) + "." + algorithm_name(static_cast<Algorithm>(a));
      out.emplace_back(base + ".W", &h[a].W);
      out.emplace_back(base + ".b", &h[a].b);
    }
  };
  head("encoder", encoder);
  head("decoder", decoder);
  head("termination", termination);
  out.emplace_back("edge_encoder.W", &edge_encoder.W);
  out.emplace_back("edge_encoder.b", &edge_encoder.b);
  out.emplace_back("message_net.W", &message_net.W);
  out.emplace_back("message_net.b", &message_net.b);
  out.emplace_back("update_proj.W", &update_proj.W);
  out.emplace_back("update_proj.b", &update_proj.b);
  out.emplace_back("gru.Wz", &gru.Wz);
  out.emplace_back("gru.bz", &gru.bz);
  out.emplace_back("gru.Wr", &gru.Wr);
  out.emplace_back("gru.br", &gru.br);
  out.emplace_back("gru.Wn", &gru.Wn);
  out.emplace_back("gru.bn", &gru.bn);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named_tensors()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<ModelParams*>(this)->named_tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

std::vector<Tensor*> ModelParams::trainable(Algorithm alg) {
  const std::size_t a = static_cast<std::size_t>(alg);
  std::vector<Tensor*> out{&encoder[a].W,     &encoder[a].b,
                           &decoder[a].W,     &decoder[a].b,
                           &termination[a].W, &termination[a].b};
  for (Tensor* t : processor_tensors()) {
    out.push_back(t);
  }
  return out;
}

std::vector<Tensor*> ModelParams::processor_tensors() {
  return {&edge_encoder.W, &edge_encoder.b, &message_net.W, &message_net.b,
          &update_proj.W,  &update_proj.b,  &gru.Wz,        &gru.bz,
          &gru.Wr,         &gru.br,         &gru.Wn,        &gru.bn};
}

std::vector<const Tensor*> ModelParams::processor_tensors() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<ModelParams*>(this)->processor_tensors()) {
    out.push_back(t);
  }
  return out;
}

std::vector<Tensor*> ModelParams::all_tensors() {
  std::vector<Tensor*> out;
  for (auto& [name, t] : named_tensors()) {
    (void)name;
    out.push_back(t);
  }
  return out;
}

GraphTensors GraphTensors::from_graph(const AssemblyGraph& g) {
  GraphTensors gt;
  gt.node_count = g.node_count();
  const auto& edges = g.edges();
  gt.sources.reserve(edges.size());
  gt.dests.reserve(edges.size());
  gt.features = Tensor(edges.size(), kEdgeInputDim);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    gt.sources.push_back(edges[e].src);
    gt.dests.push_back(edges[e].dst);
    gt.features.at(e, 0) = edges[e].feature;
  }
  return gt;
}

StepValues forward_step(GradTape& tape, ModelParams& params, Algorithm alg,
                        const GraphTensors& gt, GradTape::Value x,
                        GradTape::Value h_prev) {
  const std::uint32_t V = gt.node_count;
  if (V == 0) {
    throw std::invalid_argument("forward_step: empty graph");
  }
  const std::size_t K = params.latent_dim;
  const Tensor& xv = tape.value(x);
  const Tensor& hv = tape.value(h_prev);
  if (xv.rows != V || xv.cols != traces::kNodeInputDim) {
    throw std::invalid_argument("forward_step: node inputs are " +
                                xv.shape_str() + ", expected " +
                                std::to_string(V) + "x" +
                                std::to_string(traces::kNodeInputDim));
  }
  if (hv.rows != V || hv.cols != K) {
    throw std::invalid_argument("forward_step: latent state is " +
                                hv.shape_str() + ", expected " +
                                std::to_string(V) + "x" + std::to_string(K));
  }

  const std::size_t a = static_cast<std::size_t>(alg);

  // encode: z_i from the node input and the previous latent state
  auto z = linear_on(tape, params.encoder[a],
                     tape.concat_cols({x, h_prev}));

  // process: per-edge messages, max aggregation, projection, GRU update
  auto e_enc =
      linear_on(tape, params.edge_encoder, tape.constant(gt.features));
  auto z_src = tape.gather_rows(z, gt.sources);
  auto z_dst = tape.gather_rows(z, gt.dests);
  auto messages = linear_on(tape, params.message_net,
                            tape.concat_cols({z_src, z_dst, e_enc}));
  auto aggregated = tape.segment_max(messages, gt.dests, V);
  auto u = linear_on(tape, params.update_proj, aggregated);

  auto uh = tape.concat_cols({u, h_prev});
  auto z_gate = tape.sigmoid(tape.add_bias(
      tape.matmul(uh, tape.param(params.gru.Wz)), tape.param(params.gru.bz)));
  auto r_gate = tape.sigmoid(tape.add_bias(
      tape.matmul(uh, tape.param(params.gru.Wr)), tape.param(params.gru.br)));
  auto candidate = tape.tanh(tape.add_bias(
      tape.matmul(tape.concat_cols({u, tape.mul(r_gate, h_prev)}),
                  tape.param(params.gru.Wn)),
      tape.param(params.gru.bn)));
  auto h_next = tape.add(tape.mul(tape.one_minus(z_gate), candidate),
                         tape.mul(z_gate, h_prev));

  // decode + terminate
  auto logits =
      linear_on(tape, params.decoder[a], tape.concat_cols({z, h_next}));
  auto tau_logit =
      linear_on(tape, params.termination[a], tape.mean_rows(h_next));

  return StepValues{logits, tau_logit, h_next};
}

TeacherStep step_teacher_forced(GradTape& tape, ModelParams& params,
                                const GraphTensors& gt,
                                const traces::ExecutionTrace& trace,
                                std::uint32_t t, GradTape::Value h_prev) {
  const std::uint32_t V = gt.node_count;
  auto x = tape.constant(
      Tensor::from(V, traces::kNodeInputDim, traces::teacher_inputs(trace, t)));
  StepValues values = forward_step(tape, params, trace.algorithm, gt, x, h_prev);

  const traces::StepState& target = trace.steps[t - 1];
  std::vector<double> reached(target.reached.begin(), target.reached.end());
  auto node_loss = tape.bce_with_logits(values.logits, std::move(reached));
  auto tau_loss = tape.bce_with_logits(
      values.tau_logit, {static_cast<double>(target.continue_flag)});
  return TeacherStep{values, tape.add(node_loss, tau_loss)};
}

std::vector<std::uint8_t> threshold_logits(const Tensor& logits) {
  std::vector<std::uint8_t> out(logits.rows);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    out[i] = logits.at(i, 0) >= 0.0 ? 1 : 0;
  }
  return out;
}

std::vector<traces::StepState> rollout(ModelParams& params, Algorithm alg,
                                       const AssemblyGraph& g,
                                       const std::vector<std::uint8_t>& is_source,
                                       std::size_t max_steps) {
  const std::uint32_t V = g.node_count();
  if (max_steps < 1) {
    throw std::invalid_argument("rollout: max_steps must be >= 1");
  }
  if (is_source.size() != V) {
    throw std::invalid_argument("rollout: source indicator size mismatch");
  }
  const GraphTensors gt = GraphTensors::from_graph(g);

  Tensor h(V, params.latent_dim);
  std::vector<std::uint8_t> prev = is_source;
  std::vector<traces::StepState> out;
  for (std::size_t step = 0; step < max_steps; ++step) {
    GradTape tape;
    Tensor x(V, traces::kNodeInputDim);
    for (std::uint32_t i = 0; i < V; ++i) {
      x.at(i, 0) = prev[i];
      x.at(i, 1) = is_source[i];
    }
    StepValues sv = forward_step(tape, params, alg, gt, tape.constant(std::move(x)),
                                 tape.constant(std::move(h)));
    traces::StepState state;
    state.reached = threshold_logits(tape.value(sv.logits));
    const bool keep_going = tape.value(sv.tau_logit).at(0, 0) >= 0.0;
    state.continue_flag = keep_going ? 1 : 0;
    prev = state.reached;
    h = tape.value(sv.h_next);
    out.push_back(std::move(state));
    if (!keep_going) {
      break;
    }
  }
  return out;
}

}  // namespace nge::model
