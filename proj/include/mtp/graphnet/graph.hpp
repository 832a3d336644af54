#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mtp/sim/types.hpp"
#include "mtp/topology.hpp"

namespace mtp::gn {

// Node attribute layout: (x, y, dx, dy); edge attribute: relative position
// of sender minus receiver. Positions are normalized (scene-centered,
// scaled) before entering the network.
constexpr int kNodeWidth = 4;
constexpr int kEdgeWidth = 2;
constexpr int kDestOneHot = 4;
constexpr int kSignOneHot = 2;

struct Normalizer {
  double center_x = 0.0;
  double center_y = 0.0;
  double scale = 30.0;

  std::array<double, 2> to_local(double x, double y) const {
    return {(x - center_x) / scale, (y - center_y) / scale};
  }
  std::array<double, 2> to_world(double x, double y) const {
    return {x * scale + center_x, y * scale + center_y};
  }
};

// Directed graph over agents: every ordered pair is an edge.
struct SceneGraph {
  int n = 0;
  std::vector<std::array<double, kNodeWidth>> nodes;
  std::vector<std::pair<int, int>> edges;  // (sender, receiver)
  std::vector<std::array<double, kEdgeWidth>> edge_attr;
  std::vector<double> global;  // starts as zeros
};

// One-hot mode conditioning aligned with a SceneGraph's structure.
struct Conditioning {
  std::vector<std::array<double, kDestOneHot>> dest;  // per node
  std::vector<std::array<double, kSignOneHot>> sign;  // per edge
};

std::vector<std::pair<int, int>> all_ordered_pairs(int n);

// Builds the graph for the state at one timestep; velocities are the
// difference to the previous state (both normalized).
SceneGraph encode_scene(const std::vector<sim::AgentState>& curr,
                        const std::vector<sim::AgentState>& prev,
                        const Normalizer& norm, int global_width);

Conditioning conditioning_for(const topology::Mode& mode,
                              const std::vector<std::pair<int, int>>& edges);

}  // namespace mtp::gn
