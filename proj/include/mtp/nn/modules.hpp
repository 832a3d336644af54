#pragma once

#include <string>

#include "mtp/nn/tape.hpp"

namespace mtp::nn {

struct LinearLayer {
  int w = -1, b = -1;
  int in = 0, out = 0;
};

LinearLayer make_linear(ParamStore& params, const std::string& name, int in,
                        int out);
// variant whose weights start at zero; used for residual output heads
LinearLayer make_linear_zero(ParamStore& params, const std::string& name,
                             int in, int out);
Var linear(Tape& t, const LinearLayer& l, Var x);

// Dense layer with ReLU and layer normalization (learned affine on the norm).
struct DenseReluLn {
  LinearLayer dense;
  int gain = -1, bias = -1;
};

DenseReluLn make_dense_relu_ln(ParamStore& params, const std::string& name,
                               int in, int out);
Var dense_relu_ln(Tape& t, const DenseReluLn& l, Var x);

// Two dense-relu-layernorm layers followed by a plain linear projection.
struct Mlp {
  DenseReluLn l1;
  DenseReluLn l2;
  LinearLayer out;
};

Mlp make_mlp(ParamStore& params, const std::string& name, int in, int hidden,
             int out);
Var mlp(Tape& t, const Mlp& m, Var x);

// Single GRU cell; gates stacked (reset, update, candidate) in that order.
struct GruCell {
  int wx = -1, bx = -1;  // input-to-gates, 3H x in
  int wh = -1, bh = -1;  // hidden-to-gates, 3H x H
  int in = 0, hidden = 0;
};

GruCell make_gru(ParamStore& params, const std::string& name, int in,
                 int hidden);
Var gru_cell(Tape& t, const GruCell& cell, Var x, Var h);

}  // namespace mtp::nn
