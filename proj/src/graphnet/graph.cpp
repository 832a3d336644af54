#include "mtp/graphnet/graph.hpp"

#include <stdexcept>

namespace mtp::gn {

std::vector<std::pair<int, int>> all_ordered_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int s = 0; s < n; ++s) {
    for (int r = 0; r < n; ++r) {
      if (s != r) out.emplace_back(s, r);
    }
  }
  return out;
}

SceneGraph encode_scene(const std::vector<sim::AgentState>& curr,
                        const std::vector<sim::AgentState>& prev,
                        const Normalizer& norm, int global_width) {
  if (curr.size() != prev.size()) {
    throw std::invalid_argument("encode_scene: state size mismatch");
  }
  SceneGraph g;
  g.n = static_cast<int>(curr.size());
  g.nodes.reserve(curr.size());
  for (std::size_t i = 0; i < curr.size(); ++i) {
    const auto p = norm.to_local(curr[i].x, curr[i].y);
    const auto q = norm.to_local(prev[i].x, prev[i].y);
    g.nodes.push_back({p[0], p[1], p[0] - q[0], p[1] - q[1]});
  }
  g.edges = all_ordered_pairs(g.n);
  g.edge_attr.reserve(g.edges.size());
  for (const auto& [s, r] : g.edges) {
    g.edge_attr.push_back(
        {g.nodes[static_cast<std::size_t>(s)][0] -
             g.nodes[static_cast<std::size_t>(r)][0],
         g.nodes[static_cast<std::size_t>(s)][1] -
             g.nodes[static_cast<std::size_t>(r)][1]});
  }
  g.global.assign(static_cast<std::size_t>(global_width), 0.0);
  return g;
}

Conditioning conditioning_for(const topology::Mode& mode,
                              const std::vector<std::pair<int, int>>& edges) {
  const int n = mode.agent_count();
  Conditioning c;
  c.dest.assign(static_cast<std::size_t>(n), {0, 0, 0, 0});
  for (int i = 0; i < n; ++i) {
    c.dest[static_cast<std::size_t>(i)][static_cast<std::size_t>(
        mode.dests[static_cast<std::size_t>(i)])] = 1.0;
  }
  c.sign.assign(edges.size(), {0, 0});
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const int sign = mode.signs[static_cast<std::size_t>(
        topology::pair_index(edges[k].first, edges[k].second, n))];
    c.sign[k][sign > 0 ? 0 : 1] = 1.0;
  }
  return c;
}

}  // namespace mtp::gn
