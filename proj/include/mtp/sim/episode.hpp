#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mtp/sim/controllers.hpp"
#include "mtp/sim/kinematics.hpp"
#include "mtp/sim/map.hpp"
#include "mtp/sim/path.hpp"

namespace mtp::sim {

struct AgentSpec {
  Side start = Side::South;
  Side dest = Side::North;
  BehaviorProfile profile;
  double spawn_distance = 50.0;  // m from intersection center along the path
  double dest_distance = 50.0;   // m past the center where the crossing ends
  double initial_speed = 0.0;
};

struct ScenarioConfig {
  IntersectionMap map;
  VehicleParams vehicle;
  TrackerConfig tracker;
  TtcConfig ttc;
  double dt = 0.1;          // s
  double time_cap = 60.0;   // s
  bool priority_enabled = true;
  double spawn_jitter = 0.0;  // m, uniform jitter on spawn distance
  std::vector<AgentSpec> agents;
};

// Everything an external controller may look at for one step.
struct WorldView {
  const std::vector<AgentState>* states = nullptr;
  const std::vector<Path>* paths = nullptr;
  const std::vector<PrioritySignal>* signals = nullptr;
  const ScenarioConfig* scenario = nullptr;
  int step = 0;
  double time = 0.0;
};

// Per-agent controller override; returning nullopt falls back to the
// built-in behavioral control (TTC priority + PID tracking).
using ControllerHook =
    std::function<std::optional<Control>(int agent, const WorldView&)>;

JointTrajectory run_episode(const ScenarioConfig& scenario, std::uint64_t seed,
                            const ControllerHook& hook = nullptr);

}  // namespace mtp::sim
