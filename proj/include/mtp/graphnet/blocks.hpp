#pragma once

#include <string>

#include "mtp/graphnet/graph.hpp"
#include "mtp/nn/modules.hpp"

namespace mtp::gn {

// A scene graph whose attributes live on an autodiff tape.
struct TapeGraph {
  std::vector<nn::Var> nodes;
  std::vector<nn::Var> edges;
  nn::Var global = -1;
};

// Mode conditioning on the tape; empty vectors mean "no conditioning"
// (the mode-prediction stack predicts the mode instead of consuming it).
struct TapeCond {
  std::vector<nn::Var> dest;  // per node
  std::vector<nn::Var> sign;  // per edge
};

TapeGraph lift_graph(nn::Tape& t, const SceneGraph& g);
TapeCond lift_cond(nn::Tape& t, const Conditioning& c);

struct BlockWidths {
  int v = kNodeWidth;
  int e = kEdgeWidth;
  int u = 30;
  int dest = kDestOneHot;  // 0 disables destination conditioning
  int sign = kSignOneHot;  // 0 disables winding-sign conditioning
};

// Update functions realized as two dense-relu-layernorm layers plus a
// linear projection back onto the attribute width; applied residually.
struct MlpBlock {
  BlockWidths w;
  nn::Mlp phi_e;
  nn::Mlp phi_v;
  nn::Mlp phi_u;
};

MlpBlock make_mlp_block(nn::ParamStore& params, const std::string& name,
                        BlockWidths w, int hidden);

// One graph-network pass: residual edge, node, and global updates with
// mean aggregation over the updated sets.
TapeGraph gn_block(nn::Tape& t, const MlpBlock& blk, const TapeGraph& g,
                   const TapeCond& cond,
                   const std::vector<std::pair<int, int>>& edges);

// Recurrent block: same wiring, but each update function is a shared GRU
// cell (one per element type) whose hidden state persists across timesteps,
// followed by a linear readout applied residually.
struct GruBlock {
  BlockWidths w;
  int hidden = 30;
  nn::GruCell gru_e;
  nn::GruCell gru_v;
  nn::GruCell gru_u;
  nn::LinearLayer out_e;
  nn::LinearLayer out_v;
  nn::LinearLayer out_u;
};

GruBlock make_gru_block(nn::ParamStore& params, const std::string& name,
                        BlockWidths w, int hidden);

// Per-element GRU hidden states ("hidden graph").
struct HiddenGraph {
  std::vector<nn::Var> edges;
  std::vector<nn::Var> nodes;
  nn::Var global = -1;
};

HiddenGraph zero_hidden(nn::Tape& t, int n_nodes, int n_edges, int hidden);

TapeGraph gru_block(nn::Tape& t, const GruBlock& blk, const TapeGraph& g,
                    const TapeCond& cond,
                    const std::vector<std::pair<int, int>>& edges,
                    HiddenGraph& hidden);

}  // namespace mtp::gn
