#include "mtp/sim/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace mtp::sim {

AgentState step_kinematics(const AgentState& s, double speed_cmd,
                           double steer_cmd, double dt,
                           const BehaviorProfile& profile,
                           const VehicleParams& vehicle) {
  const double steer =
      std::clamp(steer_cmd, -vehicle.steer_max, vehicle.steer_max);
  AgentState out;
  out.x = s.x + s.speed * std::cos(s.heading) * dt;
  out.y = s.y + s.speed * std::sin(s.heading) * dt;
  out.heading =
      wrap_angle(s.heading + s.speed / vehicle.wheelbase * std::tan(steer) * dt);
  const double accel = std::clamp((speed_cmd - s.speed) / dt,
                                  -profile.max_decel, profile.max_accel);
  out.speed = std::max(0.0, s.speed + accel * dt);
  return out;
}

std::array<std::array<double, 2>, 3> footprint_circles(
    const AgentState& s, const VehicleParams& vehicle) {
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  std::array<std::array<double, 2>, 3> out;
  for (int i = 0; i < 3; ++i) {
    const double o = vehicle.circle_offsets[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {s.x + o * c, s.y + o * sn};
  }
  return out;
}

double footprint_clearance(const AgentState& a, const AgentState& b,
                           const VehicleParams& vehicle) {
  const auto ca = footprint_circles(a, vehicle);
  const auto cb = footprint_circles(b, vehicle);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pa : ca) {
    for (const auto& pb : cb) {
      best = std::min(best, std::hypot(pa[0] - pb[0], pa[1] - pb[1]));
    }
  }
  return best;
}

bool in_collision(const AgentState& a, const AgentState& b,
                  const VehicleParams& vehicle) {
  return footprint_clearance(a, b, vehicle) < vehicle.collision_distance();
}

}  // namespace mtp::sim
