#pragma once

#include <cstdint>
#include <vector>

#include "mtp/dataset.hpp"
#include "mtp/sim/episode.hpp"

namespace mtp::sim {

// Grid sweep over start/destination configurations, target speeds, and
// accelerations. Strides thin each grid for desk-scale runs.
struct SweepSpec {
  int agent_count = 2;
  double speed_min = 2.8;    // m/s
  double speed_max = 12.5;   // m/s
  double speed_step = 1.4;   // m/s
  int accel_points = 10;     // uniform grid over [accel_min, accel_max]
  double accel_min = 1.0;    // m/s^2
  double accel_max = 5.0;    // m/s^2
  int config_stride = 1;
  int speed_stride = 1;
  int accel_stride = 1;
  bool prune_collisions = true;
  ScenarioConfig base;  // agents field is filled per grid point
};

std::vector<double> speed_grid(const SweepSpec& spec);
std::vector<double> accel_grid(const SweepSpec& spec);

// Start/destination combinations per the dataset recipe: agent 0 enters from
// the south; further agents take distinct arms; every agent may head to any
// of its three non-start sides.
struct AgentRoute {
  Side start;
  Side dest;
};
std::vector<std::vector<AgentRoute>> enumerate_configurations(int agent_count);

// Number of grid points before striding and pruning.
std::uint64_t sweep_size(const SweepSpec& spec);

// Runs every (strided) grid point, prunes episodes with collisions or
// timeouts, and labels the survivors with their crossing mode.
Dataset generate_dataset(const SweepSpec& spec, std::uint64_t seed,
                         int threads = 1);

}  // namespace mtp::sim
