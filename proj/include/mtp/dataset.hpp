#pragma once

#include <cstdint>
#include <vector>

#include "mtp/sim/episode.hpp"
#include "mtp/topology.hpp"

namespace mtp {

struct EpisodeRecord {
  std::uint64_t id = 0;
  std::vector<sim::AgentSpec> agents;
  topology::Mode mode;
  bool collision = false;
  bool timed_out = false;
  sim::JointTrajectory traj;
};

struct Dataset {
  int version = 1;
  int agent_count = 0;
  double dt = 0.1;
  sim::IntersectionMap map;
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
};

}  // namespace mtp
