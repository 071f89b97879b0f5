#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nge::ndiff {

// Dense row-major f64 matrix. The whole pipeline runs in 64-bit floats:
// the model is desk-scale, so precision is cheap and finite-difference
// gradient checks can be tight.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  static Tensor zeros(std::size_t r, std::size_t c) { return Tensor(r, c); }
  static Tensor from(std::size_t r, std::size_t c, std::vector<double> values);

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::size_t size() const { return data.size(); }

  std::string shape_str() const;

  bool operator==(const Tensor&) const = default;
};

// Throws std::runtime_error naming `what` if any entry is NaN/Inf.
void check_finite(const Tensor& t, const std::string& what);

// Throws std::invalid_argument naming both shapes unless they are equal.
void check_same_shape(const Tensor& a, const Tensor& b, const std::string& what);

}  // namespace nge::ndiff
