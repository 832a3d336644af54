#include "mtp/graphnet/recon_model.hpp"

#include <stdexcept>

namespace mtp::gn {

using nn::Tape;
using nn::Var;

ReconModel::ReconModel(const ReconConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), seed_(seed), params_(seed) {
  BlockWidths w;
  w.u = cfg.u_width;
  enc_ = make_mlp_block(params_, "enc", w, cfg.hidden);
  rec_ = make_gru_block(params_, "rec", w, cfg.hidden);
  dec_ = make_mlp_block(params_, "dec", w, cfg.hidden);
}

void ReconModel::load_values(const nn::ParamStore& from) {
  if (from.count() != params_.count()) {
    throw std::runtime_error("ReconModel: checkpoint entry count mismatch");
  }
  for (int i = 0; i < params_.count(); ++i) {
    auto& dst = params_.entry(i);
    const int src_id = from.find(dst.name);
    if (src_id < 0) {
      throw std::runtime_error("ReconModel: missing checkpoint entry " +
                               dst.name);
    }
    const auto& src = from.entry(src_id);
    if (src.shape != dst.shape) {
      throw std::runtime_error("ReconModel: shape mismatch for " + dst.name);
    }
    dst.value = src.value;
    dst.seed = src.seed;
  }
}

TapeGraph ReconModel::step(Tape& t, const TapeGraph& g, const TapeCond& cond,
                           const std::vector<std::pair<int, int>>& edges,
                           HiddenGraph& hidden) const {
  const TapeGraph latent = gn_block(t, enc_, g, cond, edges);
  const TapeGraph recurrent = gru_block(t, rec_, latent, cond, edges, hidden);
  return gn_block(t, dec_, recurrent, cond, edges);
}

TapeGraph feedback_graph(Tape& t, const TapeGraph& predicted,
                         const std::vector<std::pair<int, int>>& edges) {
  TapeGraph g;
  g.nodes = predicted.nodes;
  g.global = predicted.global;
  g.edges.reserve(edges.size());
  for (const auto& [s, r] : edges) {
    const Var ps = t.slice(predicted.nodes[static_cast<std::size_t>(s)], 0, 2);
    const Var pr = t.slice(predicted.nodes[static_cast<std::size_t>(r)], 0, 2);
    g.edges.push_back(t.sub(ps, pr));
  }
  return g;
}

std::vector<TapeGraph> ReconModel::rollout_on_tape(
    Tape& t, const std::vector<SceneGraph>& history, const Conditioning& cond,
    const std::vector<std::pair<int, int>>& edges, int h_f) const {
  if (history.empty()) {
    throw std::invalid_argument("rollout: empty history");
  }
  const int n = history.front().n;
  const TapeCond tc = lift_cond(t, cond);
  HiddenGraph hidden =
      zero_hidden(t, n, static_cast<int>(edges.size()), rec_.hidden);

  // read the history; the last output becomes the first prediction
  TapeGraph out;
  for (const auto& g : history) {
    out = step(t, lift_graph(t, g), tc, edges, hidden);
  }
  std::vector<TapeGraph> predictions;
  predictions.reserve(static_cast<std::size_t>(h_f));
  predictions.push_back(feedback_graph(t, out, edges));
  for (int k = 1; k < h_f; ++k) {
    out = step(t, predictions.back(), tc, edges, hidden);
    predictions.push_back(feedback_graph(t, out, edges));
  }
  return predictions;
}

JointPrediction ReconModel::reconstruct_rollout(
    const std::vector<std::vector<sim::AgentState>>& states,
    const topology::Mode& mode) const {
  if (static_cast<int>(states.size()) < 2) {
    throw std::invalid_argument("reconstruct_rollout: need history");
  }
  const int n = static_cast<int>(states.front().size());
  if (mode.agent_count() != n) {
    throw std::invalid_argument("reconstruct_rollout: mode/agent mismatch");
  }
  const auto edges = all_ordered_pairs(n);
  std::vector<SceneGraph> history;
  history.reserve(states.size() - 1);
  for (std::size_t j = 1; j < states.size(); ++j) {
    history.push_back(
        encode_scene(states[j], states[j - 1], cfg_.norm, cfg_.u_width));
  }
  const Conditioning cond = conditioning_for(mode, edges);

  Tape t(const_cast<nn::ParamStore*>(&params_));
  const auto preds = rollout_on_tape(t, history, cond, edges, cfg_.h_f);

  JointPrediction out;
  out.positions.resize(preds.size());
  out.velocities.resize(preds.size());
  for (std::size_t k = 0; k < preds.size(); ++k) {
    out.positions[k].resize(static_cast<std::size_t>(n));
    out.velocities[k].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto v = t.value(preds[k].nodes[static_cast<std::size_t>(i)]);
      out.positions[k][static_cast<std::size_t>(i)] =
          cfg_.norm.to_world(v[0], v[1]);
      out.velocities[k][static_cast<std::size_t>(i)] = {v[2] * cfg_.norm.scale,
                                                        v[3] * cfg_.norm.scale};
    }
  }
  return out;
}

namespace {
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void ReconModel::save(const std::string& path) const {
  nn::CheckpointMeta meta;
  meta.master_seed = seed_;
  meta.hyper["model"] = "recon";
  meta.hyper["agent_count"] = std::to_string(cfg_.agent_count);
  meta.hyper["hidden"] = std::to_string(cfg_.hidden);
  meta.hyper["u_width"] = std::to_string(cfg_.u_width);
  meta.hyper["h_p"] = std::to_string(cfg_.h_p);
  meta.hyper["h_f"] = std::to_string(cfg_.h_f);
  meta.hyper["norm_cx"] = fmt_double(cfg_.norm.center_x);
  meta.hyper["norm_cy"] = fmt_double(cfg_.norm.center_y);
  meta.hyper["norm_scale"] = fmt_double(cfg_.norm.scale);
  nn::save_checkpoint(path, params_, meta);
}

ReconModel ReconModel::load(const std::string& path) {
  nn::CheckpointMeta meta;
  auto store = nn::load_checkpoint(path, &meta);
  if (meta.hyper.at("model") != "recon") {
    throw std::runtime_error("ReconModel::load: not a reconstruction model");
  }
  ReconConfig cfg;
  cfg.agent_count = std::stoi(meta.hyper.at("agent_count"));
  cfg.hidden = std::stoi(meta.hyper.at("hidden"));
  cfg.u_width = std::stoi(meta.hyper.at("u_width"));
  cfg.h_p = std::stoi(meta.hyper.at("h_p"));
  cfg.h_f = std::stoi(meta.hyper.at("h_f"));
  cfg.norm.center_x = std::stod(meta.hyper.at("norm_cx"));
  cfg.norm.center_y = std::stod(meta.hyper.at("norm_cy"));
  cfg.norm.scale = std::stod(meta.hyper.at("norm_scale"));
  ReconModel model(cfg, meta.master_seed);
  model.load_values(store);
  return model;
}

}  // namespace mtp::gn
