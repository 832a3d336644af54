#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtp/graphnet/blocks.hpp"
#include "mtp/nn/checkpoint.hpp"

namespace mtp::gn {

struct ReconConfig {
  int agent_count = 2;
  int hidden = 30;   // GRU hidden size and MLP width
  int u_width = 30;  // global attribute width (free choice, = hidden)
  int h_p = 15;
  int h_f = 25;
  Normalizer norm;
};

// Joint future prediction in world coordinates.
struct JointPrediction {
  // positions[t][agent] = {x, y}, t = 0..h_f-1
  std::vector<std::vector<std::array<double, 2>>> positions;
  // velocities in m per timestep, same layout
  std::vector<std::vector<std::array<double, 2>>> velocities;
};

// Mode-conditioned trajectory reconstruction: encoder block, recurrent
// block, decoder block per timestep; history is consumed with outputs
// discarded, then predictions feed back as inputs.
class ReconModel {
 public:
  ReconModel(const ReconConfig& cfg, std::uint64_t seed);

  const ReconConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // Copies parameter values by name; throws on any mismatch.
  void load_values(const nn::ParamStore& from);

  // One enc -> recurrent -> dec pass for a single timestep.
  TapeGraph step(nn::Tape& t, const TapeGraph& g, const TapeCond& cond,
                 const std::vector<std::pair<int, int>>& edges,
                 HiddenGraph& hidden) const;

  // Builds the full differentiable rollout; returns the predicted graph for
  // each future step (the feedback inputs with recomputed edges).
  std::vector<TapeGraph> rollout_on_tape(
      nn::Tape& t, const std::vector<SceneGraph>& history,
      const Conditioning& cond,
      const std::vector<std::pair<int, int>>& edges, int h_f) const;

  // Inference entry point. states holds h_p + 1 consecutive world states
  // (the leading one supplies the first velocity).
  JointPrediction reconstruct_rollout(
      const std::vector<std::vector<sim::AgentState>>& states,
      const topology::Mode& mode) const;

  void save(const std::string& path) const;
  static ReconModel load(const std::string& path);

 private:
  ReconConfig cfg_;
  std::uint64_t seed_ = 0;
  nn::ParamStore params_;
  MlpBlock enc_;
  GruBlock rec_;
  MlpBlock dec_;
};

// Feedback graph: nodes from the decoder output, edges recomputed from the
// decoded positions, global carried through.
TapeGraph feedback_graph(nn::Tape& t, const TapeGraph& predicted,
                         const std::vector<std::pair<int, int>>& edges);

}  // namespace mtp::gn
