#pragma once

#include <span>
#include <vector>

#include "mtp/nn/tensor.hpp"

namespace mtp::nn {

// Variable handle on a Tape.
using Var = int;

// Reverse-mode autodiff over vector-valued nodes. Values are computed
// eagerly as nodes are created; backward() runs the recorded graph in
// reverse and accumulates parameter gradients into the ParamStore.
//
// The tape reuses its arenas across reset() calls, so per-window training
// does not churn the allocator.
class Tape {
 public:
  explicit Tape(ParamStore* params) : params_(params) {}

  void reset();

  Var input(std::span<const double> v);
  Var zeros(int width);

  Var affine(int w_id, int b_id, Var x);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var relu(Var x);
  Var tanh_(Var x);
  Var sigmoid(Var x);
  Var exp_(Var x);
  Var concat(std::span<const Var> xs);
  Var slice(Var x, int offset, int width);
  Var layer_norm(int gain_id, int bias_id, Var x, double eps = 1e-5);
  Var mean(std::span<const Var> xs);
  Var scale(Var x, double c);

  // scalar-valued reductions (width 1)
  Var sum_sq(Var x);
  Var cross_entropy_logits(Var logits, int target);
  Var kl_std_normal(Var mu, Var log_sigma);

  int width(Var v) const { return nodes_[static_cast<std::size_t>(v)].width; }
  std::span<const double> value(Var v) const;
  double scalar(Var v) const { return value(v)[0]; }

  // Accumulates d(loss)/d(param) into the ParamStore grads. loss must be
  // scalar. Gradients of earlier backward calls on other tapes are kept
  // (accumulation), within one tape a second call re-runs from scratch.
  void backward(Var loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    Input,
    Affine,
    Add,
    Sub,
    Mul,
    Relu,
    Tanh,
    Sigmoid,
    Exp,
    Concat,
    Slice,
    LayerNorm,
    Mean,
    Scale,
    SumSq,
    CrossEntropy,
    KlStdNormal,
  };

  struct Node {
    Op op;
    int width = 0;
    int a = -1, b = -1;       // unary/binary inputs
    int w_id = -1, b_id = -1; // parameter ids (affine / layer norm)
    int args_begin = 0, args_count = 0;  // concat/mean inputs
    int aux = 0;              // slice offset / cross-entropy target
    double c0 = 0.0, c1 = 0.0;  // scale factor / cached layer-norm stats
    int val = 0;              // arena offset
  };

  Var push(Node n);
  double* val_ptr(int node);
  const double* val_ptr(int node) const;
  double* grad_ptr(int node);

  ParamStore* params_;
  std::vector<Node> nodes_;
  std::vector<int> args_;
  std::vector<double> values_;
  std::vector<double> grads_;
};

}  // namespace mtp::nn
