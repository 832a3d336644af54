#include "mtp/nn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtp::nn {

int ParamStore::add_entry(ParamEntry e) {
  if (index_.count(e.name)) {
    throw std::invalid_argument("ParamStore: duplicate entry " + e.name);
  }
  const int id = static_cast<int>(entries_.size());
  index_[e.name] = id;
  entries_.push_back(std::move(e));
  return id;
}

int ParamStore::add_zeros(const std::string& name,
                          std::vector<std::size_t> shape) {
  ParamEntry e;
  e.name = name;
  e.shape = std::move(shape);
  e.value.assign(e.size(), 0.0);
  e.grad.assign(e.size(), 0.0);
  return add_entry(std::move(e));
}

int ParamStore::add_const(const std::string& name,
                          std::vector<std::size_t> shape, double fill) {
  const int id = add_zeros(name, std::move(shape));
  auto& e = entries_[static_cast<std::size_t>(id)];
  std::fill(e.value.begin(), e.value.end(), fill);
  return id;
}

int ParamStore::add_uniform(const std::string& name,
                            std::vector<std::size_t> shape, double scale) {
  const int id = add_zeros(name, std::move(shape));
  auto& e = entries_[static_cast<std::size_t>(id)];
  e.seed = derive_seed(master_seed_, static_cast<std::uint64_t>(id) + 1);
  Rng rng(e.seed);
  for (auto& v : e.value) v = rng.uniform(-scale, scale);
  return id;
}

int ParamStore::find(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) std::fill(e.grad.begin(), e.grad.end(), 0.0);
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& e : entries_) {
    for (double g : e.grad) sq += g * g;
  }
  return std::sqrt(sq);
}

std::size_t ParamStore::total_size() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.size();
  return n;
}

double kl_standard_gaussian(std::span<const double> mu,
                            std::span<const double> sigma) {
  if (mu.size() != sigma.size()) {
    throw std::invalid_argument("kl_standard_gaussian: size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (sigma[i] <= 0.0) {
      throw std::invalid_argument("kl_standard_gaussian: sigma must be > 0");
    }
    const double s2 = sigma[i] * sigma[i];
    total += 0.5 * (s2 + mu[i] * mu[i] - 1.0 - std::log(s2));
  }
  return total;
}

void Tape::reset() {
  nodes_.clear();
  args_.clear();
  values_.clear();
  grads_.clear();
}

double* Tape::val_ptr(int node) {
  return values_.data() + nodes_[static_cast<std::size_t>(node)].val;
}

const double* Tape::val_ptr(int node) const {
  return values_.data() + nodes_[static_cast<std::size_t>(node)].val;
}

double* Tape::grad_ptr(int node) {
  return grads_.data() + nodes_[static_cast<std::size_t>(node)].val;
}

std::span<const double> Tape::value(Var v) const {
  return {val_ptr(v),
          static_cast<std::size_t>(nodes_[static_cast<std::size_t>(v)].width)};
}

Var Tape::push(Node n) {
  n.val = static_cast<int>(values_.size());
  values_.resize(values_.size() + static_cast<std::size_t>(n.width), 0.0);
  nodes_.push_back(n);
  return static_cast<Var>(nodes_.size() - 1);
}

Var Tape::input(std::span<const double> v) {
  Node n{};
  n.op = Op::Input;
  n.width = static_cast<int>(v.size());
  const Var id = push(n);
  std::copy(v.begin(), v.end(), val_ptr(id));
  return id;
}

Var Tape::zeros(int width) {
  Node n{};
  n.op = Op::Input;
  n.width = width;
  return push(n);
}

Var Tape::affine(int w_id, int b_id, Var x) {
  const auto& W = params_->entry(w_id);
  const auto& B = params_->entry(b_id);
  if (W.shape.size() != 2) throw std::invalid_argument("affine: W not 2-d");
  const int out = static_cast<int>(W.shape[0]);
  const int in = static_cast<int>(W.shape[1]);
  if (width(x) != in || static_cast<int>(B.size()) != out) {
    throw std::invalid_argument("affine: shape mismatch for " + W.name);
  }
  Node n{};
  n.op = Op::Affine;
  n.width = out;
  n.a = x;
  n.w_id = w_id;
  n.b_id = b_id;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  const double* w = W.value.data();
  for (int r = 0; r < out; ++r) {
    double acc = B.value[static_cast<std::size_t>(r)];
    const double* row = w + static_cast<std::size_t>(r) * in;
    for (int c = 0; c < in; ++c) acc += row[c] * xv[c];
    y[r] = acc;
  }
  return id;
}

namespace {
void check_same_width(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": width mismatch");
}
}  // namespace

Var Tape::add(Var a, Var b) {
  check_same_width(width(a), width(b), "add");
  Node n{};
  n.op = Op::Add;
  n.width = width(a);
  n.a = a;
  n.b = b;
  const Var id = push(n);
  const double* av = val_ptr(a);
  const double* bv = val_ptr(b);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = av[i] + bv[i];
  return id;
}

Var Tape::sub(Var a, Var b) {
  check_same_width(width(a), width(b), "sub");
  Node n{};
  n.op = Op::Sub;
  n.width = width(a);
  n.a = a;
  n.b = b;
  const Var id = push(n);
  const double* av = val_ptr(a);
  const double* bv = val_ptr(b);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = av[i] - bv[i];
  return id;
}

Var Tape::mul(Var a, Var b) {
  check_same_width(width(a), width(b), "mul");
  Node n{};
  n.op = Op::Mul;
  n.width = width(a);
  n.a = a;
  n.b = b;
  const Var id = push(n);
  const double* av = val_ptr(a);
  const double* bv = val_ptr(b);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = av[i] * bv[i];
  return id;
}

Var Tape::relu(Var x) {
  Node n{};
  n.op = Op::Relu;
  n.width = width(x);
  n.a = x;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  return id;
}

Var Tape::tanh_(Var x) {
  Node n{};
  n.op = Op::Tanh;
  n.width = width(x);
  n.a = x;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = std::tanh(xv[i]);
  return id;
}

Var Tape::sigmoid(Var x) {
  Node n{};
  n.op = Op::Sigmoid;
  n.width = width(x);
  n.a = x;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) {
    const double v = xv[i];
    y[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                    : std::exp(v) / (1.0 + std::exp(v));
  }
  return id;
}

Var Tape::exp_(Var x) {
  Node n{};
  n.op = Op::Exp;
  n.width = width(x);
  n.a = x;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = std::exp(xv[i]);
  return id;
}

Var Tape::concat(std::span<const Var> xs) {
  Node n{};
  n.op = Op::Concat;
  n.args_begin = static_cast<int>(args_.size());
  n.args_count = static_cast<int>(xs.size());
  int total = 0;
  for (Var v : xs) {
    args_.push_back(v);
    total += width(v);
  }
  n.width = total;
  const Var id = push(n);
  double* y = val_ptr(id);
  for (Var v : xs) {
    const double* xv = val_ptr(v);
    y = std::copy(xv, xv + width(v), y);
  }
  return id;
}

Var Tape::slice(Var x, int offset, int w) {
  if (offset < 0 || offset + w > width(x)) {
    throw std::invalid_argument("slice: out of range");
  }
  Node n{};
  n.op = Op::Slice;
  n.width = w;
  n.a = x;
  n.aux = offset;
  const Var id = push(n);
  const double* xv = val_ptr(x) + offset;
  std::copy(xv, xv + w, val_ptr(id));
  return id;
}

Var Tape::layer_norm(int gain_id, int bias_id, Var x, double eps) {
  const auto& G = params_->entry(gain_id);
  const auto& B = params_->entry(bias_id);
  const int w = width(x);
  if (static_cast<int>(G.size()) != w || static_cast<int>(B.size()) != w) {
    throw std::invalid_argument("layer_norm: affine shape mismatch");
  }
  Node n{};
  n.op = Op::LayerNorm;
  n.width = w;
  n.a = x;
  n.w_id = gain_id;
  n.b_id = bias_id;
  const double* xv_pre = val_ptr(x);
  double mean_v = 0.0;
  for (int i = 0; i < w; ++i) mean_v += xv_pre[i];
  mean_v /= w;
  double var_v = 0.0;
  for (int i = 0; i < w; ++i) {
    const double d = xv_pre[i] - mean_v;
    var_v += d * d;
  }
  var_v /= w;
  n.c0 = mean_v;
  n.c1 = std::sqrt(var_v + eps);
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < w; ++i) {
    y[i] = G.value[static_cast<std::size_t>(i)] * (xv[i] - n.c0) / n.c1 +
           B.value[static_cast<std::size_t>(i)];
  }
  return id;
}

Var Tape::mean(std::span<const Var> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty input set");
  Node n{};
  n.op = Op::Mean;
  n.width = width(xs[0]);
  n.args_begin = static_cast<int>(args_.size());
  n.args_count = static_cast<int>(xs.size());
  for (Var v : xs) {
    check_same_width(width(v), n.width, "mean");
    args_.push_back(v);
  }
  const Var id = push(n);
  double* y = val_ptr(id);
  for (Var v : xs) {
    const double* xv = val_ptr(v);
    for (int i = 0; i < n.width; ++i) y[i] += xv[i];
  }
  for (int i = 0; i < n.width; ++i) y[i] /= static_cast<double>(xs.size());
  return id;
}

Var Tape::scale(Var x, double c) {
  Node n{};
  n.op = Op::Scale;
  n.width = width(x);
  n.a = x;
  n.c0 = c;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double* y = val_ptr(id);
  for (int i = 0; i < n.width; ++i) y[i] = c * xv[i];
  return id;
}

Var Tape::sum_sq(Var x) {
  Node n{};
  n.op = Op::SumSq;
  n.width = 1;
  n.a = x;
  const Var id = push(n);
  const double* xv = val_ptr(x);
  double acc = 0.0;
  for (int i = 0; i < width(x); ++i) acc += xv[i] * xv[i];
  val_ptr(id)[0] = acc;
  return id;
}

Var Tape::cross_entropy_logits(Var logits, int target) {
  if (target < 0 || target >= width(logits)) {
    throw std::invalid_argument("cross_entropy_logits: bad target");
  }
  Node n{};
  n.op = Op::CrossEntropy;
  n.width = 1;
  n.a = logits;
  n.aux = target;
  const Var id = push(n);
  const double* xv = val_ptr(logits);
  const int w = width(logits);
  double mx = xv[0];
  for (int i = 1; i < w; ++i) mx = std::max(mx, xv[i]);
  double lse = 0.0;
  for (int i = 0; i < w; ++i) lse += std::exp(xv[i] - mx);
  val_ptr(id)[0] = mx + std::log(lse) - xv[target];
  return id;
}

Var Tape::kl_std_normal(Var mu, Var log_sigma) {
  check_same_width(width(mu), width(log_sigma), "kl_std_normal");
  Node n{};
  n.op = Op::KlStdNormal;
  n.width = 1;
  n.a = mu;
  n.b = log_sigma;
  const Var id = push(n);
  const double* m = val_ptr(mu);
  const double* ls = val_ptr(log_sigma);
  double acc = 0.0;
  for (int i = 0; i < width(mu); ++i) {
    const double s2 = std::exp(2.0 * ls[i]);
    acc += 0.5 * (s2 + m[i] * m[i] - 1.0 - 2.0 * ls[i]);
  }
  val_ptr(id)[0] = acc;
  return id;
}

void Tape::backward(Var loss) {
  if (width(loss) != 1) throw std::invalid_argument("backward: loss not scalar");
  grads_.assign(values_.size(), 0.0);
  grads_[static_cast<std::size_t>(
      nodes_[static_cast<std::size_t>(loss)].val)] = 1.0;

  for (int idx = static_cast<int>(nodes_.size()) - 1; idx >= 0; --idx) {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    const double* gy = grads_.data() + n.val;
    switch (n.op) {
      case Op::Input:
        break;
      case Op::Affine: {
        auto& W = params_->entry(n.w_id);
        auto& B = params_->entry(n.b_id);
        const int out = n.width;
        const int in = width(n.a);
        const double* xv = val_ptr(n.a);
        double* gx = grad_ptr(n.a);
        for (int r = 0; r < out; ++r) {
          const double g = gy[r];
          if (g == 0.0) continue;
          const double* row = W.value.data() + static_cast<std::size_t>(r) * in;
          double* grow = W.grad.data() + static_cast<std::size_t>(r) * in;
          for (int c = 0; c < in; ++c) {
            gx[c] += row[c] * g;
            grow[c] += xv[c] * g;
          }
          B.grad[static_cast<std::size_t>(r)] += g;
        }
        break;
      }
      case Op::Add: {
        double* ga = grad_ptr(n.a);
        double* gb = grad_ptr(n.b);
        for (int i = 0; i < n.width; ++i) {
          ga[i] += gy[i];
          gb[i] += gy[i];
        }
        break;
      }
      case Op::Sub: {
        double* ga = grad_ptr(n.a);
        double* gb = grad_ptr(n.b);
        for (int i = 0; i < n.width; ++i) {
          ga[i] += gy[i];
          gb[i] -= gy[i];
        }
        break;
      }
      case Op::Mul: {
        const double* av = val_ptr(n.a);
        const double* bv = val_ptr(n.b);
        double* ga = grad_ptr(n.a);
        double* gb = grad_ptr(n.b);
        for (int i = 0; i < n.width; ++i) {
          ga[i] += gy[i] * bv[i];
          gb[i] += gy[i] * av[i];
        }
        break;
      }
      case Op::Relu: {
        const double* xv = val_ptr(n.a);
        double* gx = grad_ptr(n.a);
        for (int i = 0; i < n.width; ++i) {
          if (xv[i] > 0.0) gx[i] += gy[i];
        }
        break;
      }
      case Op::Tanh: {
        const double* yv = val_ptr(idx);
        double* gx = grad_ptr(n.a);
        for (int i = 0; i < n.width; ++i) {
          gx[i] += gy[i] * (1.0 - yv[i] * yv[i]);
        }
        break;
      }
      case Op::Sigmoid: {
        const double* yv = val_ptr(idx);
        double* gx = grad_ptr(n.a);
        for (int i = 0; i < n.width; ++i) {
          gx[i] += gy[i] * yv[i] * (1.0 - yv[i]);
        }
        break;
      }
      case Op::Exp: {
        const double* yv = val_ptr(idx);
        double* gx = grad_ptr(n.a);
        for (int i = 0; i < n.width; ++i) gx[i] += gy[i] * yv[i];
        break;
      }
      case Op::Concat: {
        int off = 0;
        for (int k = 0; k < n.args_count; ++k) {
          const Var v = args_[static_cast<std::size_t>(n.args_begin + k)];
          double* gx = grad_ptr(v);
          const int w = width(v);
          for (int i = 0; i < w; ++i) gx[i] += gy[off + i];
          off += w;
        }
        break;
      }
      case Op::Slice: {
        double* gx = grad_ptr(n.a) + n.aux;
        for (int i = 0; i < n.width; ++i) gx[i] += gy[i];
        break;
      }
      case Op::LayerNorm: {
        auto& G = params_->entry(n.w_id);
        auto& B = params_->entry(n.b_id);
        const double* xv = val_ptr(n.a);
        double* gx = grad_ptr(n.a);
        const int w = n.width;
        const double inv_s = 1.0 / n.c1;
        double mean_gxh = 0.0, mean_gxh_xh = 0.0;
        // xhat recomputed from the cached statistics
        for (int i = 0; i < w; ++i) {
          const double xh = (xv[i] - n.c0) * inv_s;
          const double gxh = gy[i] * G.value[static_cast<std::size_t>(i)];
          G.grad[static_cast<std::size_t>(i)] += gy[i] * xh;
          B.grad[static_cast<std::size_t>(i)] += gy[i];
          mean_gxh += gxh;
          mean_gxh_xh += gxh * xh;
        }
        mean_gxh /= w;
        mean_gxh_xh /= w;
        for (int i = 0; i < w; ++i) {
          const double xh = (xv[i] - n.c0) * inv_s;
          const double gxh = gy[i] * G.value[static_cast<std::size_t>(i)];
          gx[i] += inv_s * (gxh - mean_gxh - xh * mean_gxh_xh);
        }
        break;
      }
      case Op::Mean: {
        const double f = 1.0 / static_cast<double>(n.args_count);
        for (int k = 0; k < n.args_count; ++k) {
          const Var v = args_[static_cast<std::size_t>(n.args_begin + k)];
          double* gx = grad_ptr(v);
          for (int i = 0; i < n.width; ++i) gx[i] += gy[i] * f;
        }
        break;
      }
      case Op::Scale: {
        double* gx = grad_ptr(n.a);
        for (int i = 0; i < n.width; ++i) gx[i] += gy[i] * n.c0;
        break;
      }
      case Op::SumSq: {
        const double* xv = val_ptr(n.a);
        double* gx = grad_ptr(n.a);
        const double g = gy[0];
        for (int i = 0; i < width(n.a); ++i) gx[i] += 2.0 * xv[i] * g;
        break;
      }
      case Op::CrossEntropy: {
        const double* xv = val_ptr(n.a);
        double* gx = grad_ptr(n.a);
        const int w = width(n.a);
        const double g = gy[0];
        double mx = xv[0];
        for (int i = 1; i < w; ++i) mx = std::max(mx, xv[i]);
        double lse = 0.0;
        for (int i = 0; i < w; ++i) lse += std::exp(xv[i] - mx);
        for (int i = 0; i < w; ++i) {
          const double p = std::exp(xv[i] - mx) / lse;
          gx[i] += g * (p - (i == n.aux ? 1.0 : 0.0));
        }
        break;
      }
      case Op::KlStdNormal: {
        const double* m = val_ptr(n.a);
        const double* ls = val_ptr(n.b);
        double* gm = grad_ptr(n.a);
        double* gls = grad_ptr(n.b);
        const double g = gy[0];
        for (int i = 0; i < width(n.a); ++i) {
          gm[i] += g * m[i];
          gls[i] += g * (std::exp(2.0 * ls[i]) - 1.0);
        }
        break;
      }
    }
  }
}

}  // namespace mtp::nn
