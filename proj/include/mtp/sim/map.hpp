#pragma once

#include <array>
#include <optional>

#include "mtp/sim/types.hpp"

namespace mtp::sim {

// Four-way intersection with axis-aligned arms meeting at the origin.
// The surrounding scene spans 2*half_extent on a side; each arm centerline
// runs from the road edge out to arm_length from the center.
struct IntersectionMap {
  double half_extent = 30.0;  // m
  double lane_width = 3.5;    // m
  double arm_length = 120.0;  // m, from intersection center

  double road_half_width() const { return lane_width; }  // two lanes per road

  // Unit vector pointing outward along the arm.
  std::array<double, 2> arm_direction(Side s) const;

  // Lateral offset of the right-hand lane centerline from the road center.
  double lane_offset() const { return lane_width / 2.0; }

  // Distance from (x, y) to the centerline segment of the given arm.
  double distance_to_arm(Side s, double x, double y) const;

  // Arm whose centerline is nearest within the acceptance band, if any.
  std::optional<Side> nearest_arm(double x, double y, double band = 5.0) const;
};

}  // namespace mtp::sim
