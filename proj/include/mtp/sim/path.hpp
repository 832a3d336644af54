#pragma once

#include <optional>
#include <vector>

#include "mtp/sim/map.hpp"
#include "mtp/sim/types.hpp"

namespace mtp::sim {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double curvature = 0.0;  // signed, counter-clockwise positive
};

// Right-hand-traffic lane path across the intersection: entry straight,
// constant-radius arc (for turns), exit straight. Waypoints are spaced at
// most 0.5 m apart along arc length.
class Path {
 public:
  Path() = default;
  Path(std::vector<Waypoint> pts, Side from, Side to);

  Side from() const { return from_; }
  Side to() const { return to_; }
  const std::vector<Waypoint>& waypoints() const { return pts_; }
  const std::vector<double>& stations() const { return station_; }
  double length() const { return station_.empty() ? 0.0 : station_.back(); }

  Waypoint state_at(double station) const;

  struct Projection {
    double station = 0.0;
    double lateral = 0.0;  // signed, positive left of path
    double distance = 0.0;
  };
  // Nearest point over the whole polyline.
  Projection project(double x, double y) const;
  // Nearest point searching only waypoints within `window` meters of the
  // station hint; controllers use this to walk monotonically along the path.
  Projection project_near(double x, double y, double station_hint,
                          double window = 25.0) const;

  // Largest |curvature| over [station, station + horizon].
  double max_curvature_ahead(double station, double horizon) const;

 private:
  Projection project_range(double x, double y, std::size_t lo,
                           std::size_t hi) const;

  std::vector<Waypoint> pts_;
  std::vector<double> station_;
  Side from_ = Side::South;
  Side to_ = Side::North;
};

Path reference_path(const IntersectionMap& map, Side from, Side to);

struct Crossing {
  double station_a = 0.0;
  double station_b = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// All transversal intersection points of the two path polylines, ordered by
// station along `a`.
std::vector<Crossing> path_crossings(const Path& a, const Path& b);

}  // namespace mtp::sim
