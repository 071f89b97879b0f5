#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "nge/tensor.hpp"

namespace nge::ndiff {

// Reverse-mode tape over the fixed op set the executor needs. Build one
// tape per forward pass; handles are indices into the recorded sequence.
// Every op validates shapes and finiteness at record time, so divergence
// surfaces at the op that produced it.
class GradTape {
 public:
  using Value = int;

  // Leaf bound to an external parameter tensor; repeated calls with the
  // same tensor return the same handle, so gradients accumulate into one
  // slot per parameter.
  Value param(Tensor& t);
  // Leaf holding a constant (inputs, previous latents -- anything gradients
  // should not flow out of).
  Value constant(Tensor t);

  // (m,k) x (k,n) -> (m,n)
  Value matmul(Value a, Value b);
  // (r,c) + broadcast (1,c) -> (r,c)
  Value add_bias(Value m, Value bias);
  // column-wise concatenation of 2 or 3 equal-row tensors
  Value concat_cols(std::vector<Value> parts);
  Value sigmoid(Value x);
  Value tanh(Value x);
  Value add(Value a, Value b);        // elementwise
  Value mul(Value a, Value b);        // elementwise
  Value one_minus(Value x);           // 1 - x
  Value scale(Value x, double factor);
  // rows of m selected by `rows` (repeats allowed) -> (rows.size(), c)
  Value gather_rows(Value m, std::vector<std::uint32_t> rows);
  // per-destination elementwise max of message rows; destinations with no
  // incoming message get a zero row; ties give gradient to the lowest
  // message index
  Value segment_max(Value messages, std::vector<std::uint32_t> destinations,
                    std::uint32_t node_count);
  // (r,c) -> (1,c) column means
  Value mean_rows(Value m);
  // mean over all elements of the numerically stable logistic loss;
  // targets must match the logits' shape; result is (1,1)
  Value bce_with_logits(Value logits, std::vector<double> targets);

  const Tensor& value(Value v) const;

  // Reverse sweep from a (1,1) loss; may be called once per tape.
  void backward(Value loss);

  // Accumulated gradient of a param leaf; zeros if the parameter never
  // influenced the loss. Valid after backward().
  const Tensor& grad(const Tensor& param) const;

 private:
  enum class Op {
    leaf,
    matmul,
    add_bias,
    concat,
    sigmoid,
    tanh_op,
    add,
    mul,
    one_minus,
    scale,
    gather,
    segmax,
    mean_rows,
    bce,
  };

  struct Node {
    Op op;
    Value a = -1, b = -1, c = -1;
    Tensor value;
    Tensor grad;
    std::vector<std::uint32_t> indices;  // gather rows / segment destinations
    std::vector<std::uint32_t> winners;  // segment_max argmax per output cell
    std::vector<double> targets;         // bce
    double factor = 0.0;                 // scale
    Tensor* bound = nullptr;             // param leaf
  };

  Value push(Node node, const std::string& what);
  const Tensor& val(Value v) const { return nodes_[v].value; }

  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, Value> param_slots_;
  bool ran_backward_ = false;
};

// Central-difference gradient check: `build` records a full forward pass on
// a fresh tape and returns the scalar loss handle; every element of every
// tensor in `params` is perturbed by +-1e-5. Returns the maximum relative
// error |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
double check_gradients(const std::function<GradTape::Value(GradTape&)>& build,
                       const std::vector<Tensor*>& params);

}  // namespace nge::ndiff
