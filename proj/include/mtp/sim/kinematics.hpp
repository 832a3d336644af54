#pragma once

#include <array>

#include "mtp/sim/types.hpp"

namespace mtp::sim {

struct VehicleParams {
  double wheelbase = 2.7;   // m
  double steer_max = 0.6;   // rad
  double circle_radius = 1.2;
  std::array<double, 3> circle_offsets = {-1.4, 0.0, 1.4};  // along body axis

  double collision_distance() const { return 2.0 * circle_radius; }
};

// One simple-car (bicycle) integration step. Steering is clamped to
// +-steer_max and the speed moves toward speed_cmd under the profile's
// acceleration and deceleration bounds. Speed never goes negative.
AgentState step_kinematics(const AgentState& s, double speed_cmd,
                           double steer_cmd, double dt,
                           const BehaviorProfile& profile,
                           const VehicleParams& vehicle);

// Centers of the three footprint circles for a given pose.
std::array<std::array<double, 2>, 3> footprint_circles(
    const AgentState& s, const VehicleParams& vehicle);

// Minimum circle-center distance between two agents' footprints.
double footprint_clearance(const AgentState& a, const AgentState& b,
                           const VehicleParams& vehicle);

bool in_collision(const AgentState& a, const AgentState& b,
                  const VehicleParams& vehicle);

}  // namespace mtp::sim
