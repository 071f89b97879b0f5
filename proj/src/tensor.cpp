#include "nge/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace nge::ndiff {

Tensor Tensor::from(std::size_t r, std::size_t c, std::vector<double> values) {
  if (values.size() != r * c) {
    throw std::invalid_argument("tensor literal size " +
                                std::to_string(values.size()) +
                                " does not fill shape " + std::to_string(r) +
                                "x" + std::to_string(c));
  }
  Tensor t;
  t.rows = r;
  t.cols = c;
  t.data = std::move(values);
  return t;
}

std::string Tensor::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void check_finite(const Tensor& t, const std::string& what) {
  for (double v : t.data) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite value in " + what);
    }
  }
}

void check_same_shape(const Tensor& a, const Tensor& b, const std::string& what) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw std::invalid_argument(what + ": shape mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
  }
}

}  // namespace nge::ndiff
