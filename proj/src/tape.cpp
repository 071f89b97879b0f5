#include "nge/tape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nge::ndiff {

namespace {

constexpr std::uint32_t kNoWinner = std::numeric_limits<std::uint32_t>::max();

double stable_bce(double x, double y) {
  // max(x,0) - x*y + log(1 + exp(-|x|))
  return std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid_scalar(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

GradTape::Value GradTape::push(Node node, const std::string& what) {
  check_finite(node.value, what);
  nodes_.push_back(std::move(node));
  return static_cast<Value>(nodes_.size() - 1);
}

GradTape::Value GradTape::param(Tensor& t) {
  auto it = param_slots_.find(&t);
  if (it != param_slots_.end()) {
    return it->second;
  }
  Node n;
  n.op = Op::leaf;
  n.value = t;
  n.bound = &t;
  Value v = push(std::move(n), "parameter");
  param_slots_.emplace(&t, v);
  return v;
}

GradTape::Value GradTape::constant(Tensor t) {
  Node n;
  n.op = Op::leaf;
  n.value = std::move(t);
  return push(std::move(n), "constant");
}

GradTape::Value GradTape::matmul(Value a, Value b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  if (A.cols != B.rows) {
    throw std::invalid_argument("matmul: shape mismatch " + A.shape_str() +
                                " x " + B.shape_str());
  }
  Node n;
  n.op = Op::matmul;
  n.a = a;
  n.b = b;
  n.value = Tensor(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double* arow = &A.data[i * A.cols];
    double* orow = &n.value.data[i * B.cols];
    for (std::size_t k = 0; k < A.cols; ++k) {
      const double aik = arow[k];
      const double* brow = &B.data[k * B.cols];
      for (std::size_t j = 0; j < B.cols; ++j) {
        orow[j] += aik * brow[j];
      }
    }
  }
  return push(std::move(n), "matmul");
}

GradTape::Value GradTape::add_bias(Value m, Value bias) {
  const Tensor& M = val(m);
  const Tensor& B = val(bias);
  if (B.rows != 1 || B.cols != M.cols) {
    throw std::invalid_argument("add_bias: shape mismatch " + M.shape_str() +
                                " + " + B.shape_str());
  }
  Node n;
  n.op = Op::add_bias;
  n.a = m;
  n.b = bias;
  n.value = M;
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      n.value.at(i, j) += B.at(0, j);
    }
  }
  return push(std::move(n), "add_bias");
}

GradTape::Value GradTape::concat_cols(std::vector<Value> parts) {
  if (parts.size() != 2 && parts.size() != 3) {
    throw std::invalid_argument("concat_cols takes 2 or 3 tensors");
  }
  std::size_t rows = val(parts[0]).rows;
  std::size_t cols = 0;
  for (Value p : parts) {
    if (val(p).rows != rows) {
      throw std::invalid_argument("concat_cols: row mismatch " +
                                  val(parts[0]).shape_str() + " vs " +
                                  val(p).shape_str());
    }
    cols += val(p).cols;
  }
  Node n;
  n.op = Op::concat;
  n.a = parts[0];
  n.b = parts[1];
  n.c = parts.size() == 3 ? parts[2] : -1;
  n.value = Tensor(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t off = 0;
    for (Value p : parts) {
      const Tensor& P = val(p);
      for (std::size_t j = 0; j < P.cols; ++j) {
        n.value.at(i, off + j) = P.at(i, j);
      }
      off += P.cols;
    }
  }
  return push(std::move(n), "concat_cols");
}

GradTape::Value GradTape::sigmoid(Value x) {
  Node n;
  n.op = Op::sigmoid;
  n.a = x;
  n.value = val(x);
  for (double& v : n.value.data) {
    v = sigmoid_scalar(v);
  }
  return push(std::move(n), "sigmoid");
}

GradTape::Value GradTape::tanh(Value x) {
  Node n;
  n.op = Op::tanh_op;
  n.a = x;
  n.value = val(x);
  for (double& v : n.value.data) {
    v = std::tanh(v);
  }
  return push(std::move(n), "tanh");
}

GradTape::Value GradTape::add(Value a, Value b) {
  check_same_shape(val(a), val(b), "add");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.value = val(a);
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data[i] += val(b).data[i];
  }
  return push(std::move(n), "add");
}

GradTape::Value GradTape::mul(Value a, Value b) {
  check_same_shape(val(a), val(b), "mul");
  Node n;
  n.op = Op::mul;
  n.a = a;
  n.b = b;
  n.value = val(a);
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data[i] *= val(b).data[i];
  }
  return push(std::move(n), "mul");
}

GradTape::Value GradTape::one_minus(Value x) {
  Node n;
  n.op = Op::one_minus;
  n.a = x;
  n.value = val(x);
  for (double& v : n.value.data) {
    v = 1.0 - v;
  }
  return push(std::move(n), "one_minus");
}

GradTape::Value GradTape::scale(Value x, double factor) {
  Node n;
  n.op = Op::scale;
  n.a = x;
  n.factor = factor;
  n.value = val(x);
  for (double& v : n.value.data) {
    v *= factor;
  }
  return push(std::move(n), "scale");
}

GradTape::Value GradTape::gather_rows(Value m, std::vector<std::uint32_t> rows) {
  const Tensor& M = val(m);
  for (std::uint32_t r : rows) {
    if (r >= M.rows) {
      throw std::invalid_argument("gather_rows: row " + std::to_string(r) +
                                  " out of " + std::to_string(M.rows));
    }
  }
  Node n;
  n.op = Op::gather;
  n.a = m;
  n.value = Tensor(rows.size(), M.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      n.value.at(i, j) = M.at(rows[i], j);
    }
  }
  n.indices = std::move(rows);
  return push(std::move(n), "gather_rows");
}

GradTape::Value GradTape::segment_max(Value messages,
                                      std::vector<std::uint32_t> destinations,
                                      std::uint32_t node_count) {
  const Tensor& M = val(messages);
  if (destinations.size() != M.rows) {
    throw std::invalid_argument(
        "segment_max: " + std::to_string(destinations.size()) +
        " destinations for " + std::to_string(M.rows) + " messages");
  }
  for (std::uint32_t d : destinations) {
    if (d >= node_count) {
      throw std::invalid_argument("segment_max: destination " +
                                  std::to_string(d) + " out of " +
                                  std::to_string(node_count) + " nodes");
    }
  }
  Node n;
  n.op = Op::segmax;
  n.a = messages;
  n.value = Tensor(node_count, M.cols);  // zero rows where nothing arrives
  n.winners.assign(static_cast<std::size_t>(node_count) * M.cols, kNoWinner);
  for (std::size_t e = 0; e < M.rows; ++e) {
    const std::uint32_t d = destinations[e];
    for (std::size_t j = 0; j < M.cols; ++j) {
      std::uint32_t& win = n.winners[d * M.cols + j];
      // strict > keeps the lowest message index on ties
      if (win == kNoWinner || M.at(e, j) > n.value.at(d, j)) {
        n.value.at(d, j) = M.at(e, j);
        win = static_cast<std::uint32_t>(e);
      }
    }
  }
  n.indices = std::move(destinations);
  return push(std::move(n), "segment_max");
}

GradTape::Value GradTape::mean_rows(Value m) {
  const Tensor& M = val(m);
  if (M.rows == 0) {
    throw std::invalid_argument("mean_rows: empty tensor");
  }
  Node n;
  n.op = Op::mean_rows;
  n.a = m;
  n.value = Tensor(1, M.cols);
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      n.value.at(0, j) += M.at(i, j);
    }
  }
  for (double& v : n.value.data) {
    v /= static_cast<double>(M.rows);
  }
  return push(std::move(n), "mean_rows");
}

GradTape::Value GradTape::bce_with_logits(Value logits,
                                          std::vector<double> targets) {
  const Tensor& X = val(logits);
  if (targets.size() != X.size() || X.size() == 0) {
    throw std::invalid_argument(
        "bce_with_logits: " + std::to_string(targets.size()) +
        " targets for logits " + X.shape_str());
  }
  Node n;
  n.op = Op::bce;
  n.a = logits;
  n.value = Tensor(1, 1);
  double sum = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sum += stable_bce(X.data[i], targets[i]);
  }
  n.value.at(0, 0) = sum / static_cast<double>(X.size());
  n.targets = std::move(targets);
  return push(std::move(n), "bce_with_logits");
}

const Tensor& GradTape::value(Value v) const {
  if (v < 0 || v >= static_cast<Value>(nodes_.size())) {
    throw std::out_of_range("tape handle out of range");
  }
  return nodes_[v].value;
}

void GradTape::backward(Value loss) {
  if (ran_backward_) {
    throw std::logic_error("backward already ran on this tape");
  }
  const Tensor& L = value(loss);
  if (L.rows != 1 || L.cols != 1) {
    throw std::invalid_argument("backward: loss must be 1x1, got " +
                                L.shape_str());
  }
  ran_backward_ = true;
  for (Node& n : nodes_) {
    n.grad = Tensor(n.value.rows, n.value.cols);
  }
  nodes_[loss].grad.at(0, 0) = 1.0;

  for (Value v = static_cast<Value>(nodes_.size()) - 1; v >= 0; --v) {
    Node& n = nodes_[v];
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::leaf:
        break;
      case Op::matmul: {
        const Tensor& A = val(n.a);
        const Tensor& B = val(n.b);
        Tensor& dA = nodes_[n.a].grad;
        Tensor& dB = nodes_[n.b].grad;
        // dA += g * B^T
        for (std::size_t i = 0; i < A.rows; ++i) {
          for (std::size_t k = 0; k < A.cols; ++k) {
            double acc = 0;
            for (std::size_t j = 0; j < B.cols; ++j) {
              acc += g.at(i, j) * B.at(k, j);
            }
            dA.at(i, k) += acc;
          }
        }
        // dB += A^T * g
        for (std::size_t k = 0; k < A.cols; ++k) {
          for (std::size_t i = 0; i < A.rows; ++i) {
            const double aik = A.at(i, k);
            for (std::size_t j = 0; j < B.cols; ++j) {
              dB.at(k, j) += aik * g.at(i, j);
            }
          }
        }
        break;
      }
      case Op::add_bias: {
        Tensor& dM = nodes_[n.a].grad;
        Tensor& dBias = nodes_[n.b].grad;
        for (std::size_t i = 0; i < g.rows; ++i) {
          for (std::size_t j = 0; j < g.cols; ++j) {
            dM.at(i, j) += g.at(i, j);
            dBias.at(0, j) += g.at(i, j);
          }
        }
        break;
      }
      case Op::concat: {
        std::size_t off = 0;
        for (Value p : {n.a, n.b, n.c}) {
          if (p < 0) {
            continue;
          }
          Tensor& dP = nodes_[p].grad;
          for (std::size_t i = 0; i < dP.rows; ++i) {
            for (std::size_t j = 0; j < dP.cols; ++j) {
              dP.at(i, j) += g.at(i, off + j);
            }
          }
          off += dP.cols;
        }
        break;
      }
      case Op::sigmoid: {
        Tensor& dX = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data[i];
          dX.data[i] += g.data[i] * y * (1.0 - y);
        }
        break;
      }
      case Op::tanh_op: {
        Tensor& dX = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = n.value.data[i];
          dX.data[i] += g.data[i] * (1.0 - y * y);
        }
        break;
      }
      case Op::add: {
        for (std::size_t i = 0; i < g.size(); ++i) {
          nodes_[n.a].grad.data[i] += g.data[i];
          nodes_[n.b].grad.data[i] += g.data[i];
        }
        break;
      }
      case Op::mul: {
        for (std::size_t i = 0; i < g.size(); ++i) {
          nodes_[n.a].grad.data[i] += g.data[i] * val(n.b).data[i];
          nodes_[n.b].grad.data[i] += g.data[i] * val(n.a).data[i];
        }
        break;
      }
      case Op::one_minus: {
        for (std::size_t i = 0; i < g.size(); ++i) {
          nodes_[n.a].grad.data[i] -= g.data[i];
        }
        break;
      }
      case Op::scale: {
        for (std::size_t i = 0; i < g.size(); ++i) {
          nodes_[n.a].grad.data[i] += g.data[i] * n.factor;
        }
        break;
      }
      case Op::gather: {
        Tensor& dM = nodes_[n.a].grad;
        for (std::size_t i = 0; i < n.indices.size(); ++i) {
          for (std::size_t j = 0; j < g.cols; ++j) {
            dM.at(n.indices[i], j) += g.at(i, j);
          }
        }
        break;
      }
      case Op::segmax: {
        Tensor& dM = nodes_[n.a].grad;
        for (std::size_t cell = 0; cell < n.winners.size(); ++cell) {
          const std::uint32_t win = n.winners[cell];
          if (win != kNoWinner) {
            dM.data[win * g.cols + cell % g.cols] += g.data[cell];
          }
        }
        break;
      }
      case Op::mean_rows: {
        Tensor& dM = nodes_[n.a].grad;
        const double inv = 1.0 / static_cast<double>(dM.rows);
        for (std::size_t i = 0; i < dM.rows; ++i) {
          for (std::size_t j = 0; j < dM.cols; ++j) {
            dM.at(i, j) += g.at(0, j) * inv;
          }
        }
        break;
      }
      case Op::bce: {
        Tensor& dX = nodes_[n.a].grad;
        const double scale_by = g.at(0, 0) / static_cast<double>(dX.size());
        for (std::size_t i = 0; i < dX.size(); ++i) {
          const double x = val(n.a).data[i];
          dX.data[i] += scale_by * (sigmoid_scalar(x) - n.targets[i]);
        }
        break;
      }
    }
  }
}

const Tensor& GradTape::grad(const Tensor& param) const {
  if (!ran_backward_) {
    throw std::logic_error("grad queried before backward");
  }
  auto it = param_slots_.find(&param);
  if (it == param_slots_.end()) {
    throw std::invalid_argument("tensor is not a parameter on this tape");
  }
  return nodes_[it->second].grad;
}

double check_gradients(const std::function<GradTape::Value(GradTape&)>& build,
                       const std::vector<Tensor*>& params) {
  GradTape tape;
  GradTape::Value loss = build(tape);
  tape.backward(loss);

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Tensor* p : params) {
    analytic.push_back(tape.grad(*p));
  }

  const double h = 1e-5;
  auto eval = [&build]() {
    GradTape t;
    return t.value(build(t)).at(0, 0);
  };

  double max_rel = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& p = *params[pi];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double orig = p.data[i];
      p.data[i] = orig + h;
      const double up = eval();
      p.data[i] = orig - h;
      const double down = eval();
      p.data[i] = orig;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[pi].data[i];
      const double rel =
          std::abs(a - numeric) /
          std::max({std::abs(a), std::abs(numeric), 1e-6});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace nge::ndiff
