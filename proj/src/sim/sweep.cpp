#include "mtp/sim/sweep.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "mtp/nn/rng.hpp"

namespace mtp::sim {

std::vector<double> speed_grid(const SweepSpec& spec) {
  std::vector<double> out;
  for (double v = spec.speed_min; v <= spec.speed_max + 1e-9;
       v += spec.speed_step) {
    out.push_back(v);
  }
  return out;
}

std::vector<double> accel_grid(const SweepSpec& spec) {
  std::vector<double> out;
  if (spec.accel_points == 1) {
    out.push_back(0.5 * (spec.accel_min + spec.accel_max));
    return out;
  }
  for (int i = 0; i < spec.accel_points; ++i) {
    out.push_back(spec.accel_min + (spec.accel_max - spec.accel_min) * i /
                                       (spec.accel_points - 1));
  }
  return out;
}

std::vector<std::vector<AgentRoute>> enumerate_configurations(int agent_count) {
  if (agent_count < 1 || agent_count > 4) {
    throw std::invalid_argument("enumerate_configurations: 1..4 agents");
  }
  // Agent 0 always enters from the south; further agents take distinct arms
  // in a fixed scan order.
  const std::array<Side, 3> others = {Side::West, Side::North, Side::East};

  std::vector<std::vector<Side>> start_sets;
  if (agent_count == 1) {
    start_sets.push_back({Side::South});
  } else if (agent_count == 2) {
    for (auto s : others) start_sets.push_back({Side::South, s});
  } else if (agent_count == 3) {
    for (auto s1 : others) {
      for (auto s2 : others) {
        if (s2 == s1) continue;
        start_sets.push_back({Side::South, s1, s2});
      }
    }
  } else {
    for (auto s1 : others) {
      for (auto s2 : others) {
        if (s2 == s1) continue;
        for (auto s3 : others) {
          if (s3 == s1 || s3 == s2) continue;
          start_sets.push_back({Side::South, s1, s2, s3});
        }
      }
    }
  }
  // Four agents fill all arms; keep only the canonical assignment so the
  // configuration count is 3^4 over destinations.
  if (agent_count == 4) {
    start_sets = {{Side::South, Side::West, Side::North, Side::East}};
  }

  std::vector<std::vector<AgentRoute>> out;
  for (const auto& starts : start_sets) {
    std::vector<std::array<Side, 3>> dest_choices(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      int c = 0;
      for (auto s : kAllSides) {
        if (s != starts[i]) dest_choices[i][static_cast<std::size_t>(c++)] = s;
      }
    }
    std::vector<int> idx(starts.size(), 0);
    for (;;) {
      std::vector<AgentRoute> cfg;
      for (std::size_t i = 0; i < starts.size(); ++i) {
        cfg.push_back({starts[i], dest_choices[i][static_cast<std::size_t>(idx[i])]});
      }
      out.push_back(std::move(cfg));
      int i = static_cast<int>(starts.size()) - 1;
      while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == 3) {
        idx[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return out;
}

namespace {

template <typename T>
std::vector<T> strided(const std::vector<T>& in, int stride) {
  if (stride <= 1) return in;
  std::vector<T> out;
  for (std::size_t i = 0; i < in.size(); i += static_cast<std::size_t>(stride)) {
    out.push_back(in[i]);
  }
  return out;
}

// Odometer over per-agent speed and accel grids.
struct GridPoint {
  std::size_t config = 0;
  std::vector<int> speed_idx;
  std::vector<int> accel_idx;
};

}  // namespace

std::uint64_t sweep_size(const SweepSpec& spec) {
  const auto configs = enumerate_configurations(spec.agent_count);
  const auto speeds = speed_grid(spec);
  const auto accels = accel_grid(spec);
  std::uint64_t total = configs.size();
  for (int i = 0; i < spec.agent_count; ++i) {
    total *= speeds.size();
  }
  for (int i = 0; i < spec.agent_count; ++i) {
    total *= accels.size();
  }
  return total;
}

Dataset generate_dataset(const SweepSpec& spec, std::uint64_t seed,
                         int threads) {
  const auto configs =
      strided(enumerate_configurations(spec.agent_count), spec.config_stride);
  const auto speeds = strided(speed_grid(spec), spec.speed_stride);
  const auto accels = strided(accel_grid(spec), spec.accel_stride);
  if (configs.empty() || speeds.empty() || accels.empty()) {
    throw std::invalid_argument("generate_dataset: empty sweep");
  }

  const int n = spec.agent_count;
  // Enumerate scenario configs in deterministic sweep order.
  std::vector<ScenarioConfig> scenarios;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::vector<int> sp_idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<int> ac_idx(static_cast<std::size_t>(n), 0);
      for (;;) {
        ScenarioConfig sc = spec.base;
        sc.agents.clear();
        for (int i = 0; i < n; ++i) {
          AgentSpec a;
          a.start = configs[c][static_cast<std::size_t>(i)].start;
          a.dest = configs[c][static_cast<std::size_t>(i)].dest;
          a.profile.target_speed = speeds[static_cast<std::size_t>(
              sp_idx[static_cast<std::size_t>(i)])];
          const double acc = accels[static_cast<std::size_t>(
              ac_idx[static_cast<std::size_t>(i)])];
          a.profile.max_accel = acc;
          a.profile.max_decel = acc;
          a.spawn_distance = spec.base.agents.empty()
                                 ? 50.0
                                 : spec.base.agents[0].spawn_distance;
          sc.agents.push_back(a);
        }
        scenarios.push_back(std::move(sc));

        int i = n - 1;
        while (i >= 0 && ++ac_idx[static_cast<std::size_t>(i)] ==
                             static_cast<int>(accels.size())) {
          ac_idx[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
      int i = n - 1;
      while (i >= 0 && ++sp_idx[static_cast<std::size_t>(i)] ==
                           static_cast<int>(speeds.size())) {
        sp_idx[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

  std::vector<EpisodeRecord> results(scenarios.size());
  std::vector<char> keep(scenarios.size(), 0);

  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t e = lo; e < hi; ++e) {
      EpisodeRecord rec;
      rec.id = e;
      rec.agents = scenarios[e].agents;
      rec.traj = run_episode(scenarios[e], nn::derive_seed(seed, e));
      rec.collision = rec.traj.collision;
      rec.timed_out = rec.traj.timed_out;
      if (rec.collision || rec.timed_out) {
        if (spec.prune_collisions) continue;
      } else {
        rec.mode = topology::mode_of(rec.traj, spec.base.map);
      }
      results[e] = std::move(rec);
      keep[e] = 1;
    }
  };

  if (threads <= 1 || scenarios.size() < 16) {
    worker(0, scenarios.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (scenarios.size() + static_cast<std::size_t>(threads) - 1) /
                              static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = static_cast<std::size_t>(t) * chunk;
      const std::size_t hi = std::min(scenarios.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  Dataset ds;
  ds.agent_count = n;
  ds.dt = spec.base.dt;
  ds.map = spec.base.map;
  ds.seed = seed;
  // merge in sweep order so the dataset is independent of thread count
  for (std::size_t e = 0; e < scenarios.size(); ++e) {
    if (keep[e]) ds.episodes.push_back(std::move(results[e]));
  }
  return ds;
}

}  // namespace mtp::sim
