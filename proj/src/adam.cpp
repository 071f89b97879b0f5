#include "nge/adam.hpp"

#include <cmath>

namespace nge::ndiff {

void AdamOptimizer::apply(Tensor& param, const Tensor& grad) {
  check_same_shape(param, grad, "adam update");
  check_finite(grad, "adam gradient");

  AdamState& s = states_[&param];
  if (s.step == 0) {
    s.m = Tensor(param.rows, param.cols);
    s.v = Tensor(param.rows, param.cols);
  }
  s.step += 1;

  const double b1 = hyper_.beta1;
  const double b2 = hyper_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(s.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(s.step));

  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad.data[i];
    s.m.data[i] = b1 * s.m.data[i] + (1.0 - b1) * g;
    s.v.data[i] = b2 * s.v.data[i] + (1.0 - b2) * g * g;
    const double m_hat = s.m.data[i] / corr1;
    const double v_hat = s.v.data[i] / corr2;
    param.data[i] -= hyper_.lr * m_hat / (std::sqrt(v_hat) + hyper_.eps);
  }
  check_finite(param, "adam parameter");
}

void AdamOptimizer::apply_all(const std::vector<Tensor*>& params,
                              const GradTape& tape) {
  for (Tensor* p : params) {
    apply(*p, tape.grad(*p));
  }
}

}  // namespace nge::ndiff
