#include "mtp/sim/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtp/topology.hpp"

namespace mtp::sim {

PathTracker::PathTracker(const Path* path, const VehicleParams* vehicle,
                         TrackerConfig cfg)
    : path_(path), vehicle_(vehicle), cfg_(cfg) {}

void PathTracker::reset(double station) {
  station_ = station;
  prev_cross_ = 0.0;
  has_prev_ = false;
}

void PathTracker::update_station(const AgentState& s) {
  station_ = path_->project_near(s.x, s.y, station_).station;
}

Control PathTracker::pid_track(const AgentState& s, double target_speed,
                               double dt) {
  const auto proj = path_->project_near(s.x, s.y, station_);
  if (proj.distance > cfg_.off_path_limit) {
    throw std::runtime_error("pid_track: agent left the path corridor");
  }
  station_ = proj.station;

  // reference one control period ahead; longer previews cut corners
  const double lead = std::max(cfg_.lookahead_base, s.speed * dt);
  const Waypoint ref = path_->state_at(proj.station + lead);
  const double heading_err = wrap_angle(ref.heading - s.heading);

  const double cross = proj.lateral;
  const double dcross = has_prev_ ? (cross - prev_cross_) / dt : 0.0;
  prev_cross_ = cross;
  has_prev_ = true;

  // curvature feedforward keeps the PID terms small through the arcs
  const double steer_ff = std::atan(vehicle_->wheelbase * ref.curvature);
  double steer = steer_ff + cfg_.kp_heading * heading_err -
                 cfg_.kp_cross * cross - cfg_.kd_cross * dcross;
  steer = std::clamp(steer, -vehicle_->steer_max, vehicle_->steer_max);

  // slow down for curvature ahead of the braking envelope
  const double horizon = std::max(5.0, s.speed * 2.0);
  const double k = path_->max_curvature_ahead(proj.station, horizon);
  double speed_cmd = target_speed;
  if (k > 1e-6) {
    speed_cmd = std::min(speed_cmd, std::sqrt(cfg_.lat_accel_max / k));
  }
  return {speed_cmd, steer};
}

PairCrossings compute_pair_crossings(const std::vector<Path>& paths) {
  const int n = static_cast<int>(paths.size());
  PairCrossings out;
  out.crossings.resize(static_cast<std::size_t>(topology::pair_count(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.crossings[static_cast<std::size_t>(topology::pair_index(i, j, n))] =
          path_crossings(paths[i], paths[j]);
    }
  }
  return out;
}

std::vector<PrioritySignal> ttc_priority(
    const std::vector<AgentState>& states, const std::vector<double>& stations,
    const std::vector<Path>& paths, const PairCrossings& crossings,
    const TtcConfig& cfg) {
  const int n = static_cast<int>(states.size());
  std::vector<PrioritySignal> signals(static_cast<std::size_t>(n),
                                      PrioritySignal::Accelerate);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& list =
          crossings.crossings[static_cast<std::size_t>(topology::pair_index(i, j, n))];
      for (const auto& c : list) {
        const double di = c.station_a - stations[static_cast<std::size_t>(i)];
        const double dj = c.station_b - stations[static_cast<std::size_t>(j)];
        if (di < -cfg.passed_margin || dj < -cfg.passed_margin) continue;
        const double ti =
            std::max(di, 0.0) / std::max(states[static_cast<std::size_t>(i)].speed, cfg.speed_floor);
        const double tj =
            std::max(dj, 0.0) / std::max(states[static_cast<std::size_t>(j)].speed, cfg.speed_floor);
        if (std::abs(ti - tj) >= cfg.threshold) continue;
        // later arrival yields; arrival tie goes to the lower index
        int later = (ti < tj || (ti == tj && i < j)) ? j : i;
        int earlier = i + j - later;
        const double d_later = later == i ? di : dj;
        const double d_earlier = later == i ? dj : di;
        if (d_later < cfg.commit_distance && d_earlier >= cfg.commit_distance) {
          std::swap(later, earlier);
        }
        signals[static_cast<std::size_t>(later)] = PrioritySignal::Decelerate;
        break;  // one conflict per pair is enough to force a yield
      }
    }
  }
  return signals;
}

}  // namespace mtp::sim
