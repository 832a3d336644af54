#include "mtp/nn/modules.hpp"

#include <cmath>

namespace mtp::nn {

LinearLayer make_linear(ParamStore& params, const std::string& name, int in,
                        int out) {
  LinearLayer l;
  l.in = in;
  l.out = out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  l.w = params.add_uniform(name + ".w",
                           {static_cast<std::size_t>(out),
                            static_cast<std::size_t>(in)},
                           scale);
  l.b = params.add_zeros(name + ".b", {static_cast<std::size_t>(out)});
  return l;
}

LinearLayer make_linear_zero(ParamStore& params, const std::string& name,
                             int in, int out) {
  LinearLayer l;
  l.in = in;
  l.out = out;
  l.w = params.add_zeros(name + ".w", {static_cast<std::size_t>(out),
                                       static_cast<std::size_t>(in)});
  l.b = params.add_zeros(name + ".b", {static_cast<std::size_t>(out)});
  return l;
}

Var linear(Tape& t, const LinearLayer& l, Var x) {
  return t.affine(l.w, l.b, x);
}

DenseReluLn make_dense_relu_ln(ParamStore& params, const std::string& name,
                               int in, int out) {
  DenseReluLn l;
  l.dense = make_linear(params, name, in, out);
  l.gain = params.add_const(name + ".ln.g", {static_cast<std::size_t>(out)},
                            1.0);
  l.bias = params.add_zeros(name + ".ln.b", {static_cast<std::size_t>(out)});
  return l;
}

Var dense_relu_ln(Tape& t, const DenseReluLn& l, Var x) {
  return t.layer_norm(l.gain, l.bias, t.relu(t.affine(l.dense.w, l.dense.b, x)));
}

Mlp make_mlp(ParamStore& params, const std::string& name, int in, int hidden,
             int out) {
  Mlp m;
  m.l1 = make_dense_relu_ln(params, name + ".fc1", in, hidden);
  m.l2 = make_dense_relu_ln(params, name + ".fc2", hidden, hidden);
  m.out = make_linear(params, name + ".out", hidden, out);
  return m;
}

Var mlp(Tape& t, const Mlp& m, Var x) {
  return linear(t, m.out, dense_relu_ln(t, m.l2, dense_relu_ln(t, m.l1, x)));
}

GruCell make_gru(ParamStore& params, const std::string& name, int in,
                 int hidden) {
  GruCell c;
  c.in = in;
  c.hidden = hidden;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  c.wx = params.add_uniform(name + ".wx",
                            {static_cast<std::size_t>(3 * hidden),
                             static_cast<std::size_t>(in)},
                            scale);
  c.bx = params.add_zeros(name + ".bx",
                          {static_cast<std::size_t>(3 * hidden)});
  c.wh = params.add_uniform(name + ".wh",
                            {static_cast<std::size_t>(3 * hidden),
                             static_cast<std::size_t>(hidden)},
                            scale);
  c.bh = params.add_zeros(name + ".bh",
                          {static_cast<std::size_t>(3 * hidden)});
  return c;
}

Var gru_cell(Tape& t, const GruCell& cell, Var x, Var h) {
  const int H = cell.hidden;
  const Var gx = t.affine(cell.wx, cell.bx, x);
  const Var gh = t.affine(cell.wh, cell.bh, h);
  const Var r = t.sigmoid(t.add(t.slice(gx, 0, H), t.slice(gh, 0, H)));
  const Var z = t.sigmoid(t.add(t.slice(gx, H, H), t.slice(gh, H, H)));
  const Var cand =
      t.tanh_(t.add(t.slice(gx, 2 * H, H), t.mul(r, t.slice(gh, 2 * H, H))));
  // h' = (1 - z) * cand + z * h
  return t.add(cand, t.mul(z, t.sub(h, cand)));
}

}  // namespace mtp::nn
