#include "mtp/sim/map.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mtp::sim {

char side_char(Side s) {
  switch (s) {
    case Side::North: return 'N';
    case Side::East: return 'E';
    case Side::South: return 'S';
    case Side::West: return 'W';
  }
  return '?';
}

Side side_from_char(char c) {
  switch (c) {
    case 'N': return Side::North;
    case 'E': return Side::East;
    case 'S': return Side::South;
    case 'W': return Side::West;
  }
  throw std::invalid_argument(std::string("unknown side: ") + c);
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

std::array<double, 2> IntersectionMap::arm_direction(Side s) const {
  switch (s) {
    case Side::North: return {0.0, 1.0};
    case Side::East: return {1.0, 0.0};
    case Side::South: return {0.0, -1.0};
    case Side::West: return {-1.0, 0.0};
  }
  return {0.0, 0.0};
}

double IntersectionMap::distance_to_arm(Side s, double x, double y) const {
  const auto dir = arm_direction(s);
  // Station along the arm centerline, clamped to the segment from the road
  // edge out to the arm end.
  double station = x * dir[0] + y * dir[1];
  const double lo = road_half_width();
  const double hi = arm_length;
  if (station < lo) station = lo;
  if (station > hi) station = hi;
  const double px = station * dir[0];
  const double py = station * dir[1];
  return std::hypot(x - px, y - py);
}

std::optional<Side> IntersectionMap::nearest_arm(double x, double y,
                                                 double band) const {
  // inside the junction box no arm can be assigned
  if (std::abs(x) < road_half_width() && std::abs(y) < road_half_width()) {
    return std::nullopt;
  }
  Side best = Side::North;
  double best_d = std::numeric_limits<double>::infinity();
  for (auto s : kAllSides) {
    const double d = distance_to_arm(s, x, y);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  if (best_d > band) return std::nullopt;
  return best;
}

}  // namespace mtp::sim
