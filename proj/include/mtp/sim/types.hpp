#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mtp::sim {

enum class Side : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

constexpr std::array<Side, 4> kAllSides = {Side::North, Side::East, Side::South,
                                           Side::West};

char side_char(Side s);
Side side_from_char(char c);

// Pose plus longitudinal speed. Heading is normalized to (-pi, pi].
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
};

struct Trajectory {
  std::vector<AgentState> states;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  const AgentState& operator[](std::size_t t) const { return states[t]; }
  AgentState& operator[](std::size_t t) { return states[t]; }
};

// Target speed plus acceleration bounds for one agent.
struct BehaviorProfile {
  double target_speed = 8.0;  // m/s
  double max_accel = 3.0;     // m/s^2
  double max_decel = 3.0;     // m/s^2, magnitude
};

// Synchronized per-agent trajectories sampled at a common dt.
struct JointTrajectory {
  std::vector<Trajectory> agents;
  double dt = 0.1;
  bool collision = false;
  int collision_step = -1;
  bool timed_out = false;

  int agent_count() const { return static_cast<int>(agents.size()); }
  std::size_t length() const { return agents.empty() ? 0 : agents[0].size(); }
};

double wrap_angle(double a);  // to (-pi, pi]

}  // namespace mtp::sim
