#include "mtp/sim/episode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtp/nn/rng.hpp"

namespace mtp::sim {

namespace {

// Gap to the nearest agent ahead in the same lane corridor, minus a car
// length. Infinity when nobody is ahead.
double lead_gap(int self, const std::vector<AgentState>& states,
                const Path& path, double station) {
  double best = std::numeric_limits<double>::infinity();
  const auto& me = states[static_cast<std::size_t>(self)];
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (static_cast<int>(j) == self) continue;
    const auto& other = states[j];
    if (std::hypot(other.x - me.x, other.y - me.y) > 45.0) continue;
    const auto proj = path.project_near(other.x, other.y, station, 45.0);
    if (std::abs(proj.lateral) > 2.5) continue;
    if (proj.distance > 3.5) continue;
    const double gap = proj.station - station - 4.6;
    if (gap > -4.0 && gap < best) best = gap;
  }
  return best;
}

}  // namespace

JointTrajectory run_episode(const ScenarioConfig& scenario, std::uint64_t seed,
                            const ControllerHook& hook) {
  const int n = static_cast<int>(scenario.agents.size());
  if (n < 1) throw std::invalid_argument("run_episode: no agents");
  if (scenario.dt <= 0.0) throw std::invalid_argument("run_episode: dt <= 0");

  nn::Rng rng(seed);

  std::vector<Path> paths;
  std::vector<PathTracker> trackers;
  std::vector<AgentState> states;
  std::vector<double> done_station(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  paths.reserve(static_cast<std::size_t>(n));
  states.reserve(static_cast<std::size_t>(n));

  for (const auto& spec : scenario.agents) {
    paths.push_back(reference_path(scenario.map, spec.start, spec.dest));
  }
  trackers.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& spec = scenario.agents[idx];
    double spawn = spec.spawn_distance;
    if (scenario.spawn_jitter > 0.0) {
      spawn += rng.uniform(-scenario.spawn_jitter, scenario.spawn_jitter);
    }
    const double station = scenario.map.arm_length - spawn;
    if (station < 0.0 || station >= paths[idx].length()) {
      throw std::invalid_argument("run_episode: spawn distance off the path");
    }
    const Waypoint w = paths[idx].state_at(station);
    states.push_back({w.x, w.y, w.heading, spec.initial_speed});
    trackers.emplace_back(&paths[idx], &scenario.vehicle, scenario.tracker);
    trackers.back().reset(station);

    const double center_station = paths[idx].project(0.0, 0.0).station;
    done_station[idx] = std::min(center_station + spec.dest_distance,
                                 paths[idx].length() - 2.0);
  }

  const PairCrossings crossings = compute_pair_crossings(paths);
  const int max_steps =
      static_cast<int>(std::ceil(scenario.time_cap / scenario.dt));

  JointTrajectory traj;
  traj.dt = scenario.dt;
  traj.agents.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    traj.agents[static_cast<std::size_t>(i)].states.push_back(
        states[static_cast<std::size_t>(i)]);
  }

  auto check_collision = [&](int step) {
    for (int i = 0; i < n && !traj.collision; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (in_collision(states[static_cast<std::size_t>(i)],
                         states[static_cast<std::size_t>(j)],
                         scenario.vehicle)) {
          traj.collision = true;
          traj.collision_step = step;
          break;
        }
      }
    }
  };
  check_collision(0);

  std::vector<double> stations(static_cast<std::size_t>(n), 0.0);
  for (int step = 0; step < max_steps; ++step) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (!done[static_cast<std::size_t>(i)]) all_done = false;
    }
    if (all_done || traj.collision) break;

    for (int i = 0; i < n; ++i) {
      stations[static_cast<std::size_t>(i)] =
          trackers[static_cast<std::size_t>(i)].station();
    }
    std::vector<PrioritySignal> signals(static_cast<std::size_t>(n),
                                        PrioritySignal::Accelerate);
    if (scenario.priority_enabled) {
      signals = ttc_priority(states, stations, paths, crossings, scenario.ttc);
    }

    WorldView view;
    view.states = &states;
    view.paths = &paths;
    view.signals = &signals;
    view.scenario = &scenario;
    view.step = step;
    view.time = step * scenario.dt;

    std::vector<AgentState> next = states;
    for (int i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const auto& spec = scenario.agents[idx];
      Control ctrl;
      std::optional<Control> external;
      if (hook) external = hook(i, view);
      if (external) {
        ctrl = *external;
      } else {
        ctrl = trackers[idx].pid_track(states[idx], spec.profile.target_speed,
                                       scenario.dt);
        const double v = states[idx].speed;
        const double brake_dist =
            v * v / (2.0 * spec.profile.max_decel);
        if (signals[idx] == PrioritySignal::Decelerate) {
          ctrl.speed_cmd = 0.0;
        }
        // agents roll through their destination and only stop for the
        // physical end of the path
        if (paths[idx].length() - 1.5 - stations[idx] <= brake_dist) {
          ctrl.speed_cmd = 0.0;
        }
        // hold back from a slower or stopped agent in the same lane
        const double gap =
            lead_gap(i, states, paths[idx], stations[idx]);
        if (gap - 7.0 <= brake_dist) {
          ctrl.speed_cmd = 0.0;
        }
      }
      next[idx] = step_kinematics(states[idx], ctrl.speed_cmd, ctrl.steer_cmd,
                                  scenario.dt, spec.profile, scenario.vehicle);
    }
    states = next;
    for (int i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      traj.agents[idx].states.push_back(states[idx]);
      trackers[idx].update_station(states[idx]);
      if (!done[idx] && trackers[idx].station() >= done_station[idx] - 0.5) {
        done[idx] = true;
      }
    }
    check_collision(step + 1);
  }

  for (int i = 0; i < n; ++i) {
    if (!done[static_cast<std::size_t>(i)]) {
      traj.timed_out = !traj.collision;
      break;
    }
  }
  return traj;
}

}  // namespace mtp::sim
