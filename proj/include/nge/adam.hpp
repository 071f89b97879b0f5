#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nge/tape.hpp"
#include "nge/tensor.hpp"

namespace nge::ndiff {

struct AdamHyper {
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second-moment accumulators for one tensor. Each tensor keeps its own
// update counter so bias correction stays exact even when parameter groups
// are stepped at different times.
struct AdamState {
  Tensor m;
  Tensor v;
  std::uint64_t step = 0;
};

class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamHyper hyper = {}) : hyper_(hyper) {}

  // In-place Adam update of one parameter. State is keyed by the tensor's
  // address, so the same storage must be passed across calls.
  void apply(Tensor& param, const Tensor& grad);

  // Convenience: pull each parameter's gradient off a tape that already ran
  // backward() and apply it.
  void apply_all(const std::vector<Tensor*>& params, const GradTape& tape);

  const AdamHyper& hyper() const { return hyper_; }

 private:
  AdamHyper hyper_;
  std::unordered_map<const Tensor*, AdamState> states_;
};

}  // namespace nge::ndiff
