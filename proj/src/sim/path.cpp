#include "mtp/sim/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mtp::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWaypointSpacing = 0.45;  // m, keeps the <=0.5 m contract

void emit_line(std::vector<Waypoint>& out, double x0, double y0, double x1,
               double y1) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  if (len < 1e-9) return;
  const double heading = std::atan2(y1 - y0, x1 - x0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / kWaypointSpacing)));
  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    out.push_back({x0 + f * (x1 - x0), y0 + f * (y1 - y0), heading, 0.0});
  }
}

// Arc around (cx, cy) from angle a0 through signed sweep da (CCW positive).
void emit_arc(std::vector<Waypoint>& out, double cx, double cy, double r,
              double a0, double da) {
  const double len = std::abs(da) * r;
  const int steps = std::max(2, static_cast<int>(std::ceil(len / kWaypointSpacing)));
  const double dir = da >= 0.0 ? 1.0 : -1.0;
  for (int i = 0; i <= steps; ++i) {
    const double a = a0 + da * static_cast<double>(i) / steps;
    Waypoint w;
    w.x = cx + r * std::cos(a);
    w.y = cy + r * std::sin(a);
    w.heading = wrap_angle(a + dir * kPi / 2.0);
    w.curvature = dir / r;
    out.push_back(w);
  }
}

// Exact counter-clockwise quarter turns about the origin.
void rotate_quarter_turns(std::vector<Waypoint>& pts, int quarters) {
  quarters = ((quarters % 4) + 4) % 4;
  for (int q = 0; q < quarters; ++q) {
    for (auto& w : pts) {
      const double x = w.x;
      w.x = -w.y;
      w.y = x;
      w.heading = wrap_angle(w.heading + kPi / 2.0);
    }
  }
}

// Quarter turns (CCW) that map the south arm onto the given arm.
int quarters_from_south(Side s) {
  switch (s) {
    case Side::South: return 0;
    case Side::East: return 1;
    case Side::North: return 2;
    case Side::West: return 3;
  }
  return 0;
}

Side rotate_side(Side s, int quarters) {
  // CCW quarter turn order of arms: S -> E -> N -> W -> S.
  static constexpr Side cycle[4] = {Side::South, Side::East, Side::North,
                                    Side::West};
  int idx = 0;
  for (int i = 0; i < 4; ++i) {
    if (cycle[i] == s) idx = i;
  }
  return cycle[(((idx + quarters) % 4) + 4) % 4];
}

// Opposing left-turn arcs pass nose-to-nose across the junction diagonal;
// the left radius is sized so their lateral separation clears two footprint
// half-widths with margin.
constexpr double kRightTurnRadius = 5.0;
constexpr double kLeftTurnRadius = 11.0;

}  // namespace

Path::Path(std::vector<Waypoint> pts, Side from, Side to)
    : pts_(std::move(pts)), from_(from), to_(to) {
  if (pts_.size() < 2) {
    throw std::invalid_argument("Path: need at least 2 waypoints");
  }
  station_.resize(pts_.size(), 0.0);
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    const double gap = std::hypot(pts_[i].x - pts_[i - 1].x,
                                  pts_[i].y - pts_[i - 1].y);
    if (gap >= 1.0) {
      throw std::invalid_argument("Path: waypoint gap >= 1 m");
    }
    station_[i] = station_[i - 1] + gap;
  }
}

Waypoint Path::state_at(double station) const {
  if (station <= 0.0) return pts_.front();
  if (station >= length()) return pts_.back();
  const auto it = std::upper_bound(station_.begin(), station_.end(), station);
  const std::size_t hi = static_cast<std::size_t>(it - station_.begin());
  const std::size_t lo = hi - 1;
  const double seg = station_[hi] - station_[lo];
  const double f = seg > 1e-12 ? (station - station_[lo]) / seg : 0.0;
  Waypoint w;
  w.x = pts_[lo].x + f * (pts_[hi].x - pts_[lo].x);
  w.y = pts_[lo].y + f * (pts_[hi].y - pts_[lo].y);
  w.heading = wrap_angle(pts_[lo].heading +
                         f * wrap_angle(pts_[hi].heading - pts_[lo].heading));
  w.curvature = pts_[lo].curvature + f * (pts_[hi].curvature - pts_[lo].curvature);
  return w;
}

Path::Projection Path::project_range(double x, double y, std::size_t lo,
                                     std::size_t hi) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo; i < hi; ++i) {
    const double ax = pts_[i].x, ay = pts_[i].y;
    const double bx = pts_[i + 1].x, by = pts_[i + 1].y;
    const double vx = bx - ax, vy = by - ay;
    const double seg2 = vx * vx + vy * vy;
    double f = seg2 > 1e-12 ? ((x - ax) * vx + (y - ay) * vy) / seg2 : 0.0;
    f = std::clamp(f, 0.0, 1.0);
    const double px = ax + f * vx, py = ay + f * vy;
    const double d = std::hypot(x - px, y - py);
    if (d < best.distance) {
      best.distance = d;
      best.station = station_[i] + f * (station_[i + 1] - station_[i]);
      // positive lateral = left of travel direction
      const double seg = std::sqrt(seg2);
      best.lateral = seg > 1e-9 ? (vx * (y - py) - vy * (x - px)) / seg : 0.0;
    }
  }
  return best;
}

Path::Projection Path::project(double x, double y) const {
  return project_range(x, y, 0, pts_.size() - 1);
}

Path::Projection Path::project_near(double x, double y, double station_hint,
                                    double window) const {
  const auto lo_it = std::lower_bound(station_.begin(), station_.end(),
                                      station_hint - window);
  const auto hi_it = std::upper_bound(station_.begin(), station_.end(),
                                      station_hint + window);
  std::size_t lo = static_cast<std::size_t>(lo_it - station_.begin());
  std::size_t hi = static_cast<std::size_t>(hi_it - station_.begin());
  if (lo > 0) --lo;
  if (hi >= pts_.size()) hi = pts_.size() - 1;
  if (lo >= hi) return project(x, y);
  const auto local = project_range(x, y, lo, hi);
  // a stale hint can miss the true nearest point; fall back to a full scan
  if (local.distance > 0.45 * window) return project(x, y);
  return local;
}

double Path::max_curvature_ahead(double station, double horizon) const {
  const auto lo_it = std::lower_bound(station_.begin(), station_.end(), station);
  const auto hi_it = std::upper_bound(station_.begin(), station_.end(),
                                      station + horizon);
  double k = 0.0;
  for (auto it = lo_it; it != hi_it; ++it) {
    const std::size_t i = static_cast<std::size_t>(it - station_.begin());
    k = std::max(k, std::abs(pts_[i].curvature));
  }
  return k;
}

Path reference_path(const IntersectionMap& map, Side from, Side to) {
  if (from == to) {
    throw std::invalid_argument("reference_path: start equals destination");
  }
  const int q = quarters_from_south(from);
  const Side canonical_to = rotate_side(to, -q);

  const double off = map.lane_offset();
  const double arm = map.arm_length;
  std::vector<Waypoint> pts;

  // Build in the canonical frame: entering from the south, northbound on the
  // right-hand lane x = +off.
  if (canonical_to == Side::North) {
    emit_line(pts, off, -arm, off, arm);
  } else if (canonical_to == Side::East) {
    const double r = kRightTurnRadius;
    emit_line(pts, off, -arm, off, -off - r);
    // clockwise quarter arc onto the eastbound lane y = -off
    emit_arc(pts, off + r, -off - r, r, kPi, -kPi / 2.0);
    emit_line(pts, off + r, -off, arm, -off);
  } else {  // West: left turn across the junction
    const double r = kLeftTurnRadius;
    emit_line(pts, off, -arm, off, off - r);
    // counter-clockwise quarter arc onto the westbound lane y = +off
    emit_arc(pts, off - r, off - r, r, 0.0, kPi / 2.0);
    emit_line(pts, off - r, off, -arm, off);
  }

  rotate_quarter_turns(pts, q);
  return Path(std::move(pts), from, to);
}

namespace {

struct Chunk {
  std::size_t lo, hi;  // segment index range [lo, hi)
  double min_x, min_y, max_x, max_y;
};

std::vector<Chunk> make_chunks(const Path& p, std::size_t span) {
  const auto& pts = p.waypoints();
  std::vector<Chunk> chunks;
  for (std::size_t lo = 0; lo + 1 < pts.size(); lo += span) {
    Chunk c;
    c.lo = lo;
    c.hi = std::min(lo + span, pts.size() - 1);
    c.min_x = c.max_x = pts[lo].x;
    c.min_y = c.max_y = pts[lo].y;
    for (std::size_t i = lo; i <= c.hi; ++i) {
      c.min_x = std::min(c.min_x, pts[i].x);
      c.max_x = std::max(c.max_x, pts[i].x);
      c.min_y = std::min(c.min_y, pts[i].y);
      c.max_y = std::max(c.max_y, pts[i].y);
    }
    chunks.push_back(c);
  }
  return chunks;
}

bool boxes_overlap(const Chunk& a, const Chunk& b, double pad) {
  return a.min_x <= b.max_x + pad && b.min_x <= a.max_x + pad &&
         a.min_y <= b.max_y + pad && b.min_y <= a.max_y + pad;
}

}  // namespace

std::vector<Crossing> path_crossings(const Path& a, const Path& b) {
  const auto& pa = a.waypoints();
  const auto& pb = b.waypoints();
  const auto& sa = a.stations();
  const auto& sb = b.stations();
  const auto chunks_a = make_chunks(a, 16);
  const auto chunks_b = make_chunks(b, 16);

  std::vector<Crossing> out;
  for (const auto& ca : chunks_a) {
    for (const auto& cb : chunks_b) {
      if (!boxes_overlap(ca, cb, 0.0)) continue;
      for (std::size_t i = ca.lo; i < ca.hi; ++i) {
        for (std::size_t j = cb.lo; j < cb.hi; ++j) {
          const double ax = pa[i].x, ay = pa[i].y;
          const double rx = pa[i + 1].x - ax, ry = pa[i + 1].y - ay;
          const double bx = pb[j].x, by = pb[j].y;
          const double sx = pb[j + 1].x - bx, sy = pb[j + 1].y - by;
          const double denom = rx * sy - ry * sx;
          if (std::abs(denom) < 1e-12) continue;  // parallel
          const double qpx = bx - ax, qpy = by - ay;
          const double t = (qpx * sy - qpy * sx) / denom;
          const double u = (qpx * ry - qpy * rx) / denom;
          if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
          Crossing c;
          c.x = ax + t * rx;
          c.y = ay + t * ry;
          c.station_a = sa[i] + t * std::hypot(rx, ry);
          c.station_b = sb[j] + u * std::hypot(sx, sy);
          out.push_back(c);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r) {
    return l.station_a < r.station_a;
  });
  // Adjacent polyline segments sharing an endpoint can both report the same
  // geometric crossing; collapse near-duplicates.
  std::vector<Crossing> dedup;
  for (const auto& c : out) {
    if (!dedup.empty() && std::abs(dedup.back().station_a - c.station_a) < 0.5 &&
        std::abs(dedup.back().station_b - c.station_b) < 0.5) {
      continue;
    }
    dedup.push_back(c);
  }
  return dedup;
}

}  // namespace mtp::sim
