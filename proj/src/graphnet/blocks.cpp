#include "mtp/graphnet/blocks.hpp"

namespace mtp::gn {

using nn::Tape;
using nn::Var;

TapeGraph lift_graph(Tape& t, const SceneGraph& g) {
  TapeGraph out;
  out.nodes.reserve(g.nodes.size());
  for (const auto& v : g.nodes) out.nodes.push_back(t.input(v));
  out.edges.reserve(g.edge_attr.size());
  for (const auto& e : g.edge_attr) out.edges.push_back(t.input(e));
  out.global = t.input(g.global);
  return out;
}

TapeCond lift_cond(Tape& t, const Conditioning& c) {
  TapeCond out;
  out.dest.reserve(c.dest.size());
  for (const auto& d : c.dest) out.dest.push_back(t.input(d));
  out.sign.reserve(c.sign.size());
  for (const auto& s : c.sign) out.sign.push_back(t.input(s));
  return out;
}

namespace {

int phi_e_width(const BlockWidths& w) { return w.e + 2 * w.v + w.u + w.sign; }
int phi_v_width(const BlockWidths& w) { return w.e + w.v + w.u + w.dest; }
int phi_u_width(const BlockWidths& w) { return w.e + w.v + w.u; }

Var edge_update_input(Tape& t, const BlockWidths& w, const TapeGraph& g,
                      const TapeCond& cond,
                      const std::vector<std::pair<int, int>>& edges,
                      std::size_t k) {
  const auto [s, r] = edges[k];
  std::vector<Var> parts = {g.edges[k], g.nodes[static_cast<std::size_t>(s)],
                            g.nodes[static_cast<std::size_t>(r)], g.global};
  if (w.sign > 0) parts.push_back(cond.sign[k]);
  return t.concat(parts);
}

Var node_update_input(Tape& t, const BlockWidths& w, Var incoming_mean,
                      Var node, Var global, const TapeCond& cond,
                      std::size_t i) {
  std::vector<Var> parts = {incoming_mean, node, global};
  if (w.dest > 0) parts.push_back(cond.dest[i]);
  return t.concat(parts);
}

// Per-receiver mean over updated incoming edges, then graph-wide means.
struct Aggregates {
  std::vector<Var> per_receiver;
  Var edges_mean = -1;
};

Aggregates aggregate_edges(Tape& t, int n, int e_width,
                           const std::vector<Var>& new_edges,
                           const std::vector<std::pair<int, int>>& edges) {
  Aggregates agg;
  agg.per_receiver.resize(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Var>> incoming(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    incoming[static_cast<std::size_t>(edges[k].second)].push_back(new_edges[k]);
  }
  for (int i = 0; i < n; ++i) {
    auto& in = incoming[static_cast<std::size_t>(i)];
    agg.per_receiver[static_cast<std::size_t>(i)] =
        in.empty() ? t.zeros(e_width) : t.mean(in);
  }
  agg.edges_mean =
      new_edges.empty() ? t.zeros(e_width) : t.mean(new_edges);
  return agg;
}

}  // namespace

MlpBlock make_mlp_block(nn::ParamStore& params, const std::string& name,
                        BlockWidths w, int hidden) {
  MlpBlock b;
  b.w = w;
  b.phi_e = nn::make_mlp(params, name + ".phi_e", phi_e_width(w), hidden, w.e);
  b.phi_v = nn::make_mlp(params, name + ".phi_v", phi_v_width(w), hidden, w.v);
  b.phi_u = nn::make_mlp(params, name + ".phi_u", phi_u_width(w), hidden, w.u);
  return b;
}

TapeGraph gn_block(Tape& t, const MlpBlock& blk, const TapeGraph& g,
                   const TapeCond& cond,
                   const std::vector<std::pair<int, int>>& edges) {
  const int n = static_cast<int>(g.nodes.size());
  TapeGraph out;
  out.edges.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Var inp = edge_update_input(t, blk.w, g, cond, edges, k);
    out.edges.push_back(t.add(g.edges[k], nn::mlp(t, blk.phi_e, inp)));
  }
  const auto agg = aggregate_edges(t, n, blk.w.e, out.edges, edges);
  out.nodes.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Var inp = node_update_input(
        t, blk.w, agg.per_receiver[i], g.nodes[i], g.global, cond, i);
    out.nodes.push_back(t.add(g.nodes[i], nn::mlp(t, blk.phi_v, inp)));
  }
  const Var nodes_mean = t.mean(out.nodes);
  const Var u_inp = t.concat(
      std::array<Var, 3>{agg.edges_mean, nodes_mean, g.global});
  out.global = t.add(g.global, nn::mlp(t, blk.phi_u, u_inp));
  return out;
}

GruBlock make_gru_block(nn::ParamStore& params, const std::string& name,
                        BlockWidths w, int hidden) {
  GruBlock b;
  b.w = w;
  b.hidden = hidden;
  b.gru_e = nn::make_gru(params, name + ".gru_e", phi_e_width(w), hidden);
  b.gru_v = nn::make_gru(params, name + ".gru_v", phi_v_width(w), hidden);
  b.gru_u = nn::make_gru(params, name + ".gru_u", phi_u_width(w), hidden);
  b.out_e = nn::make_linear(params, name + ".out_e", hidden, w.e);
  b.out_v = nn::make_linear(params, name + ".out_v", hidden, w.v);
  b.out_u = nn::make_linear(params, name + ".out_u", hidden, w.u);
  return b;
}

HiddenGraph zero_hidden(Tape& t, int n_nodes, int n_edges, int hidden) {
  HiddenGraph h;
  h.nodes.resize(static_cast<std::size_t>(n_nodes));
  for (auto& v : h.nodes) v = t.zeros(hidden);
  h.edges.resize(static_cast<std::size_t>(n_edges));
  for (auto& v : h.edges) v = t.zeros(hidden);
  h.global = t.zeros(hidden);
  return h;
}

TapeGraph gru_block(Tape& t, const GruBlock& blk, const TapeGraph& g,
                    const TapeCond& cond,
                    const std::vector<std::pair<int, int>>& edges,
                    HiddenGraph& hidden) {
  const int n = static_cast<int>(g.nodes.size());
  TapeGraph out;
  out.edges.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Var inp = edge_update_input(t, blk.w, g, cond, edges, k);
    hidden.edges[k] = nn::gru_cell(t, blk.gru_e, inp, hidden.edges[k]);
    out.edges.push_back(
        t.add(g.edges[k], nn::linear(t, blk.out_e, hidden.edges[k])));
  }
  const auto agg = aggregate_edges(t, n, blk.w.e, out.edges, edges);
  out.nodes.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Var inp = node_update_input(
        t, blk.w, agg.per_receiver[i], g.nodes[i], g.global, cond, i);
    hidden.nodes[i] = nn::gru_cell(t, blk.gru_v, inp, hidden.nodes[i]);
    out.nodes.push_back(
        t.add(g.nodes[i], nn::linear(t, blk.out_v, hidden.nodes[i])));
  }
  const Var nodes_mean = t.mean(out.nodes);
  const Var u_inp = t.concat(
      std::array<Var, 3>{agg.edges_mean, nodes_mean, g.global});
  hidden.global = nn::gru_cell(t, blk.gru_u, u_inp, hidden.global);
  out.global = t.add(g.global, nn::linear(t, blk.out_u, hidden.global));
  return out;
}

}  // namespace mtp::gn
