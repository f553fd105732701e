#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gaze/gazegan/tensor.hpp"

namespace gaze::gazegan {

// Reverse-mode tape over Tensor values. Graphs are built dynamically; every
// op appends a node whose backward closure scatters into its parents' grad
// buffers in a fixed loop order, so whole-graph backward passes are bitwise
// reproducible.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on demand, same shape as value
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;  // reads self.grad, accumulates into parents

  Tensor& ensure_grad() {
    if (!grad.defined()) grad = Tensor(value.shape());
    return grad;
  }
};

class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> n) : node_(std::move(n)) {}

  static Var leaf(Tensor value, bool requires_grad = false) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    return Var(std::move(n));
  }

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  Tensor& grad() { return node_->ensure_grad(); }
  const Tensor& grad() const { return node_->grad; }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  std::shared_ptr<Node> node() const { return node_; }

  // A grad-free copy of the value (e.g. fake samples fed to the critic).
  Var detach() const { return leaf(node_->value, false); }

  double scalar() const {
    if (node_->value.size() != 1) throw std::logic_error("Var::scalar on non-scalar");
    return node_->value[0];
  }

  void zero_grad() {
    if (node_->grad.defined()) node_->grad = Tensor(node_->value.shape());
  }

 private:
  std::shared_ptr<Node> node_;
};

// Seeds d(root)/d(root) = 1 and runs the tape in reverse topological order.
// `root` must be scalar.
void backward(const Var& root);

// --- primitive ops ------------------------------------------------------

struct Conv2dSpec {
  int stride = 1;
  int pad = 0;
};

struct ConvT2dSpec {
  int stride = 1;
  int pad = 0;
  int output_pad = 0;
};

// x: (N, Cin, H, W), w: (Cout, Cin, kh, kw), b: (1, Cout, 1, 1)
Var conv2d(const Var& x, const Var& w, const Var& b, Conv2dSpec spec);
// x: (N, Cin, H, W), w: (Cin, Cout, kh, kw), b: (1, Cout, 1, 1)
Var conv_transpose2d(const Var& x, const Var& w, const Var& b, ConvT2dSpec spec);

Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope = 0.2);
Var logistic(const Var& x);

Var elementwise_sum(const Var& a, const Var& b);
Var elementwise_prod(const Var& a, const Var& b);
Var concat_channels(const std::vector<Var>& xs);

// a: (N, 1, H, W) broadcast across x's channels.
Var mul_channel_broadcast(const Var& x, const Var& a);

// Softmax over all spatial positions of a single-channel map, per batch item.
Var spatial_softmax(const Var& x);

// 2x2 average pooling, stride 2 (dimensions must be even).
Var avg_pool2(const Var& x);

// Weighted sum of scalar nodes.
Var weighted_sum(const std::vector<Var>& terms, const std::vector<double>& weights);

}  // namespace gaze::gazegan
