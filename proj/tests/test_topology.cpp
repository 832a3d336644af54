#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "mtp/nn/rng.hpp"
#include "mtp/topology.hpp"
#include "support/trajgen.hpp"

using namespace mtp;
using topology::WindingVector;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: signed angle between vectors via atan2 of each,
// difference wrapped to (-pi, pi], then negated for clockwise-positive.
double oracle_step(const WindingVector& a, const WindingVector& b) {
  double d = std::atan2(b.dy, b.dx) - std::atan2(a.dy, a.dx);
  while (d <= -kPi) d += 2.0 * kPi;
  while (d > kPi) d -= 2.0 * kPi;
  d = -d;
  if (d <= -kPi) d += 2.0 * kPi;
  return d;
}

sim::Trajectory circle_traj(double cx, double cy, double r, double a0,
                            double a1, int steps) {
  sim::Trajectory t;
  for (int i = 0; i <= steps; ++i) {
    const double a = a0 + (a1 - a0) * i / steps;
    t.states.push_back({cx + r * std::cos(a), cy + r * std::sin(a), 0.0, 0.0});
  }
  return t;
}

sim::Trajectory line_traj(double x0, double y0, double x1, double y1,
                          int steps) {
  sim::Trajectory t;
  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    t.states.push_back({x0 + f * (x1 - x0), y0 + f * (y1 - y0), 0.0, 0.0});
  }
  return t;
}

}  // namespace

TEST_CASE("winding_step hand cases") {
  CHECK(topology::winding_step({1, 0}, {1, 0}) == doctest::Approx(0.0));
  // clockwise quarter turn is positive
  CHECK(topology::winding_step({1, 0}, {0, -1}) == doctest::Approx(kPi / 2));
  CHECK(topology::winding_step({1, 0}, {0, 1}) == doctest::Approx(-kPi / 2));
}

TEST_CASE("winding_step matches arctangent oracle on random pairs") {
  nn::Rng rng(123);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = rng.uniform(-kPi, kPi);
    // keep away from the ambiguous half-turn
    const double d = rng.uniform(-kPi + 1e-3, kPi - 1e-3);
    WindingVector u{std::cos(a), std::sin(a)};
    WindingVector v{std::cos(a + d), std::sin(a + d)};
    CHECK(std::abs(topology::winding_step(u, v) - oracle_step(u, v)) < 1e-12);
  }
}

TEST_CASE("winding_step error cases") {
  CHECK_THROWS_AS(topology::winding_step({0, 0}, {1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(topology::winding_step({1, 0}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(topology::winding_step({1, 0}, {-1, 0}),
                  std::invalid_argument);
}

TEST_CASE("winding_number of parallel translation is zero") {
  auto a = line_traj(0, 0, 50, 0, 100);
  auto b = line_traj(3, 4, 53, 4, 100);
  CHECK(topology::winding_number(a, b).value == doctest::Approx(0.0));
}

TEST_CASE("one clockwise revolution around a static agent gives +1") {
  // clockwise = decreasing standard angle
  auto a = circle_traj(0, 0, 5, 2.0 * kPi, 0.0, 256);
  sim::Trajectory b;
  for (int i = 0; i <= 256; ++i) b.states.push_back({0, 0, 0, 0});
  CHECK(topology::winding_number(a, b).value == doctest::Approx(1.0));
  // counter-clockwise gives -1
  auto c = circle_traj(0, 0, 5, 0.0, 2.0 * kPi, 256);
  CHECK(topology::winding_number(c, b).value == doctest::Approx(-1.0));
}

TEST_CASE("winding_number errors") {
  auto a = line_traj(0, 0, 10, 0, 10);
  auto b = line_traj(0, 1, 10, 1, 11);
  CHECK_THROWS_AS(topology::winding_number(a, b), std::invalid_argument);
  sim::Trajectory single;
  single.states.push_back({0, 0, 0, 0});
  CHECK_THROWS_AS(topology::winding_number(single, single),
                  std::invalid_argument);
}

TEST_CASE("winding symmetry is exact") {
  nn::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    sim::Trajectory a, b;
    double ax = rng.uniform(-40, 40), ay = rng.uniform(-40, 40);
    double bx = ax + rng.uniform(5, 20), by = ay + rng.uniform(5, 20);
    for (int t = 0; t < 60; ++t) {
      ax += rng.uniform(-0.5, 0.8);
      ay += rng.uniform(-0.5, 0.8);
      bx += rng.uniform(-0.8, 0.5);
      by += rng.uniform(-0.5, 0.5);
      a.states.push_back({ax, ay, 0, 0});
      b.states.push_back({bx, by, 0, 0});
    }
    CHECK(topology::winding_number(a, b).value ==
          topology::winding_number(b, a).value);
  }
}

TEST_CASE("winding_sign and tie-break") {
  CHECK(topology::winding_sign({0.3}, 0.0) == 1);
  CHECK(topology::winding_sign({-0.25}, 0.0) == -1);
  // grazing pass: net lambda ~ 0, final step decides
  CHECK(topology::winding_sign({0.0}, 0.02) == 1);
  CHECK(topology::winding_sign({0.0}, -0.02) == -1);
  CHECK(topology::winding_sign({0.0}, 0.0) == 1);
}

TEST_CASE("mode_of labels a straight two-agent crossing") {
  sim::IntersectionMap map;
  // agent 0: south -> north along x = 1.75; agent 1: west -> east along
  // y = -1.75, passing the junction first.
  const int steps = 200;
  sim::JointTrajectory ep;
  ep.agents.resize(2);
  for (int i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / steps;
    // agent 1 leads by a large margin
    ep.agents[0].states.push_back({1.75, -110.0 + 190.0 * f, kPi / 2, 0});
    ep.agents[1].states.push_back({-90.0 + 190.0 * f, -1.75, 0.0, 0});
  }
  auto m = topology::mode_of(ep, map);
  REQUIRE(m.agent_count() == 2);
  CHECK(m.starts[0] == sim::Side::South);
  CHECK(m.starts[1] == sim::Side::West);
  CHECK(m.dests[0] == sim::Side::North);
  CHECK(m.dests[1] == sim::Side::East);
  // brute force the sign from the winding number itself
  auto r = topology::winding_result(ep.agents[0], ep.agents[1]);
  CHECK(m.signs[0] == topology::winding_sign(r.lambda, r.final_step));
}

TEST_CASE("mode_of rejects endpoints off every arm") {
  sim::IntersectionMap map;
  sim::JointTrajectory ep;
  ep.agents.resize(1);
  ep.agents[0].states.push_back({0.0, 0.0, 0, 0});  // junction center
  ep.agents[0].states.push_back({1.75, -60.0, 0, 0});
  CHECK_THROWS_AS(topology::mode_of(ep, map), std::invalid_argument);
}

TEST_CASE("enumerate_modes counts") {
  using sim::Side;
  auto m2 = topology::enumerate_modes({Side::South, Side::West});
  CHECK(m2.size() == 18);  // 3^2 * 2^1
  auto m3 = topology::enumerate_modes({Side::South, Side::West, Side::North});
  CHECK(m3.size() == 216);  // 3^3 * 2^3
  auto m4 = topology::enumerate_modes(
      {Side::South, Side::West, Side::North, Side::East});
  CHECK(m4.size() == 5184);  // 3^4 * 2^6
  // every mode valid and distinct
  for (const auto& m : m2) {
    CHECK(m.dests[0] != m.starts[0]);
    CHECK(m.dests[1] != m.starts[1]);
  }
  std::set<std::string> uniq;
  for (const auto& m : m4) uniq.insert(m.to_string());
  CHECK(uniq.size() == m4.size());
}

TEST_CASE("enumerate_modes rejects duplicate starts") {
  using sim::Side;
  CHECK_THROWS_AS(topology::enumerate_modes({Side::South, Side::South}),
                  std::invalid_argument);
}

TEST_CASE("topological invariance properties") {
  nn::Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto pair = testgen::random_pair(rng);
    auto a = testgen::sample(pair.a, 160);
    auto b = testgen::sample(pair.b, 160);
    const double lambda = topology::winding_number(a, b).value;

    {
      // rigid motion: common rotation + translation
      const double ang = rng.uniform(-kPi, kPi);
      const double tx = rng.uniform(-50, 50), ty = rng.uniform(-50, 50);
      auto moved = [&](const sim::Trajectory& t) {
        sim::Trajectory out = t;
        for (auto& s : out.states) {
          const double x = s.x * std::cos(ang) - s.y * std::sin(ang) + tx;
          const double y = s.x * std::sin(ang) + s.y * std::cos(ang) + ty;
          s.x = x;
          s.y = y;
        }
        return out;
      };
      CHECK(std::abs(topology::winding_number(moved(a), moved(b)).value -
                     lambda) < 1e-9);

      // uniform positive scaling
      const double k = rng.uniform(0.1, 12.0);
      auto scaled = [&](const sim::Trajectory& t) {
        sim::Trajectory out = t;
        for (auto& s : out.states) {
          s.x *= k;
          s.y *= k;
        }
        return out;
      };
      CHECK(std::abs(topology::winding_number(scaled(a), scaled(b)).value -
                     lambda) < 1e-9);

      // time reversal negates
      auto reversed = [](const sim::Trajectory& t) {
        sim::Trajectory out = t;
        std::reverse(out.states.begin(), out.states.end());
        return out;
      };
      CHECK(std::abs(topology::winding_number(reversed(a), reversed(b)).value +
                     lambda) < 1e-12);

      // concatenation additivity
      const std::size_t mid = a.size() / 2;
      auto head = [&](const sim::Trajectory& t) {
        sim::Trajectory out;
        out.states.assign(t.states.begin(),
                          t.states.begin() + static_cast<long>(mid) + 1);
        return out;
      };
      auto tail = [&](const sim::Trajectory& t) {
        sim::Trajectory out;
        out.states.assign(t.states.begin() + static_cast<long>(mid),
                          t.states.end());
        return out;
      };
      const double lam_head =
          topology::winding_number(head(a), head(b)).value;
      const double lam_tail =
          topology::winding_number(tail(a), tail(b)).value;
      CHECK(std::abs(lam_head + lam_tail - lambda) < 1e-12);
    }
  }
}

TEST_CASE("deformation below half clearance preserves the sign") {
  nn::Rng rng(4242);
  int tested = 0;
  while (tested < 40) {
    auto pair = testgen::crossing_pair(rng);
    auto a = testgen::sample(pair.a, 200);
    auto b = testgen::sample(pair.b, 200);
    auto base = topology::winding_result(a, b);
    if (std::abs(base.lambda.value) < 0.1) continue;
    const double clearance = testgen::min_clearance(pair.a, pair.b, 400);
    auto deformed = testgen::deform(pair.a, rng, 0.9 * clearance / 2.0);
    auto a2 = testgen::sample(deformed, 200);
    auto alt = topology::winding_result(a2, b);
    CHECK(topology::winding_sign(alt.lambda, alt.final_step) ==
          topology::winding_sign(base.lambda, base.final_step));
    ++tested;
  }
}

TEST_CASE("winding sum matches a 10x-oversampled oracle") {
  nn::Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    auto pair = testgen::random_pair(rng);
    auto coarse_a = testgen::sample(pair.a, 150);
    auto coarse_b = testgen::sample(pair.b, 150);
    auto fine_a = testgen::sample(pair.a, 1500);
    auto fine_b = testgen::sample(pair.b, 1500);
    const double coarse = topology::winding_number(coarse_a, coarse_b).value;
    const double fine = topology::winding_number(fine_a, fine_b).value;
    CHECK(std::abs(coarse - fine) < 1e-6);
  }
}

TEST_CASE("winding_sign agrees with the passing-side oracle") {
  nn::Rng rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    auto pair = testgen::crossing_pair(rng);
    auto a = testgen::sample(pair.a, 250);
    auto b = testgen::sample(pair.b, 250);
    auto r = topology::winding_result(a, b);
    CHECK(topology::winding_sign(r.lambda, r.final_step) ==
          testgen::passing_side_oracle(a, b));
  }
}

TEST_CASE("pair_index is a bijection") {
  for (int n = 2; n <= 4; ++n) {
    std::set<int> seen;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const int k = topology::pair_index(i, j, n);
        CHECK(k >= 0);
        CHECK(k < topology::pair_count(n));
        seen.insert(k);
      }
    }
    CHECK(static_cast<int>(seen.size()) == topology::pair_count(n));
  }
}
