#pragma once

// Analytic trajectory-pair generators shared by the topology unit tests and
// the acceptance suite. Trajectories are closed-form in t so they can be
// resampled at any rate.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "mtp/nn/rng.hpp"
#include "mtp/sim/types.hpp"

namespace mtp::testgen {

using PointFn = std::function<std::array<double, 2>(double)>;  // t in [0,1]

struct AnalyticPair {
  PointFn a;
  PointFn b;
};

inline sim::Trajectory sample(const PointFn& fn, int steps) {
  sim::Trajectory t;
  t.states.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const auto p = fn(static_cast<double>(i) / steps);
    t.states.push_back({p[0], p[1], 0.0, 0.0});
  }
  return t;
}

// Smooth wandering line: linear drift plus a few low-frequency sinusoids.
inline PointFn smooth_curve(nn::Rng& rng) {
  struct Term {
    double ax, ay, w, phx, phy;
  };
  std::array<Term, 3> terms{};
  for (auto& trm : terms) {
    trm.ax = rng.uniform(-6.0, 6.0);
    trm.ay = rng.uniform(-6.0, 6.0);
    trm.w = rng.uniform(0.5, 2.5) * std::numbers::pi;
    trm.phx = rng.uniform(0.0, 2.0 * std::numbers::pi);
    trm.phy = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  const double x0 = rng.uniform(-40.0, -20.0);
  const double y0 = rng.uniform(-15.0, 15.0);
  const double vx = rng.uniform(40.0, 70.0);
  const double vy = rng.uniform(-20.0, 20.0);
  return [=](double t) {
    double x = x0 + vx * t;
    double y = y0 + vy * t;
    for (const auto& trm : terms) {
      x += trm.ax * std::sin(trm.w * t + trm.phx);
      y += trm.ay * std::sin(trm.w * t + trm.phy);
    }
    return std::array<double, 2>{x, y};
  };
}

inline double min_clearance(const PointFn& a, const PointFn& b, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const auto pa = a(t);
    const auto pb = b(t);
    best = std::min(best, std::hypot(pa[0] - pb[0], pa[1] - pb[1]));
  }
  return best;
}

// Random pair with guaranteed clearance; retries until the pair never gets
// closer than min_sep.
inline AnalyticPair random_pair(nn::Rng& rng, double min_sep = 2.0) {
  for (;;) {
    AnalyticPair p{smooth_curve(rng), smooth_curve(rng)};
    if (min_clearance(p.a, p.b, 400) >= min_sep) return p;
  }
}

// Two agents on perpendicular courses through a shared crossing region, with
// a time offset so one clearly passes first.
inline AnalyticPair crossing_pair(nn::Rng& rng) {
  const double lead = (rng.uniform01() < 0.5 ? 1.0 : -1.0) *
                      rng.uniform(0.15, 0.35);  // fraction of the episode
  const double speed_a = rng.uniform(45.0, 70.0);
  const double speed_b = rng.uniform(45.0, 70.0);
  const double wander = rng.uniform(0.0, 2.0);
  const double w = rng.uniform(1.0, 2.0) * std::numbers::pi;
  // a: west->east through origin; b: south->north, shifted in time by lead
  PointFn a = [=](double t) {
    return std::array<double, 2>{speed_a * (t - 0.5),
                                 wander * std::sin(w * t)};
  };
  PointFn b = [=](double t) {
    return std::array<double, 2>{wander * std::sin(w * t + 1.0),
                                 speed_b * (t - 0.5 + lead)};
  };
  if (min_clearance(a, b, 400) < 1.5) return crossing_pair(rng);
  return {a, b};
}

// Adds noise that is smooth in t, zero at the endpoints, and bounded by amp.
inline PointFn deform(const PointFn& fn, nn::Rng& rng, double amp) {
  const double w1 = rng.uniform(1.0, 3.0) * std::numbers::pi;
  const double w2 = rng.uniform(1.0, 3.0) * std::numbers::pi;
  const double ph1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double ph2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return [=](double t) {
    auto p = fn(t);
    const double window = std::sin(std::numbers::pi * t);
    const double gate = window * window;
    p[0] += 0.5 * amp * gate * std::sin(w1 * t + ph1);
    p[1] += 0.5 * amp * gate * std::sin(w2 * t + ph2);
    return p;
  };
}

// Passing-side oracle: sign of the winding-vector rotation rate at closest
// approach, clockwise-positive. Independent of the summation in Eq-style
// accumulation: looks at a single local quantity.
inline int passing_side_oracle(const sim::Trajectory& a,
                               const sim::Trajectory& b) {
  std::size_t best = 1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t + 1 < a.size(); ++t) {
    const double d =
        std::hypot(a[t].x - b[t].x, a[t].y - b[t].y);
    if (d < best_d) {
      best_d = d;
      best = t;
    }
  }
  const double rx = a[best].x - b[best].x;
  const double ry = a[best].y - b[best].y;
  const double rx2 = a[best + 1].x - b[best + 1].x;
  const double ry2 = a[best + 1].y - b[best + 1].y;
  const double cross = rx * ry2 - ry * rx2;  // CCW positive
  return cross < 0.0 ? 1 : -1;               // clockwise-positive convention
}

}  // namespace mtp::testgen
