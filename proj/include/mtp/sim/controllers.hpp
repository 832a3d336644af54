#pragma once

#include <vector>

#include "mtp/sim/kinematics.hpp"
#include "mtp/sim/path.hpp"

namespace mtp::sim {

struct Control {
  double speed_cmd = 0.0;
  double steer_cmd = 0.0;
};

struct TrackerConfig {
  double kp_cross = 0.3;
  double kd_cross = 0.5;
  double kp_heading = 2.0;
  double lookahead_base = 0.5;   // m, minimum reference lead
  double lat_accel_max = 2.5;    // m/s^2, caps speed through curvature
  double off_path_limit = 10.0;  // m
};

// PID path tracker with curvature feedforward. Stateful: keeps the station
// hint and the previous cross-track error for the derivative term.
class PathTracker {
 public:
  PathTracker() = default;
  PathTracker(const Path* path, const VehicleParams* vehicle,
              TrackerConfig cfg = {});

  // Steering from PID on cross-track + heading error at a lookahead point;
  // speed command toward the target, limited by path curvature ahead.
  // Throws std::runtime_error if the agent is farther than off_path_limit
  // from the path.
  Control pid_track(const AgentState& s, double target_speed, double dt);

  // Re-projects the state onto the path without the off-path check; used
  // when an external policy is steering.
  void update_station(const AgentState& s);

  double station() const { return station_; }
  double remaining() const { return path_->length() - station_; }
  bool done(double margin = 1.0) const { return remaining() <= margin; }
  const Path& path() const { return *path_; }

  void reset(double station = 0.0);

 private:
  const Path* path_ = nullptr;
  const VehicleParams* vehicle_ = nullptr;
  TrackerConfig cfg_;
  double station_ = 0.0;
  double prev_cross_ = 0.0;
  bool has_prev_ = false;
};

enum class PrioritySignal { Accelerate, Decelerate };

struct TtcConfig {
  double threshold = 3.0;      // s, arrival-gap below which someone yields
  double speed_floor = 0.5;    // m/s, avoids divide-by-near-zero arrival times
  double commit_distance = 4.0;  // m, inside this an agent no longer yields
  double passed_margin = 2.0;    // m, beyond the crossing counts as cleared
};

// Crossing geometry between every agent pair, computed once per episode.
struct PairCrossings {
  // indexed by unordered pair (i<j) in lexicographic order
  std::vector<std::vector<Crossing>> crossings;
};

PairCrossings compute_pair_crossings(const std::vector<Path>& paths);

// Time-to-collision priority: for each pair with a path crossing ahead of
// both agents, the later-arriving agent yields when the arrival gap is
// below the threshold. Ties yield to the lower agent index.
std::vector<PrioritySignal> ttc_priority(
    const std::vector<AgentState>& states, const std::vector<double>& stations,
    const std::vector<Path>& paths, const PairCrossings& crossings,
    const TtcConfig& cfg);

}  // namespace mtp::sim
