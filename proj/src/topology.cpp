#include "mtp/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtp::topology {

namespace {
constexpr double kPi = std::numbers::pi;
}

double WindingVector::norm() const { return std::hypot(dx, dy); }

bool WindingVector::degenerate(double tol) const { return norm() < tol; }

bool Mode::operator<(const Mode& other) const {
  if (starts != other.starts) return starts < other.starts;
  if (dests != other.dests) return dests < other.dests;
  return signs < other.signs;
}

std::string Mode::to_string() const {
  std::string out;
  for (auto s : starts) out += sim::side_char(s);
  out += ">";
  for (auto d : dests) out += sim::side_char(d);
  out += "|";
  for (auto w : signs) out += (w > 0 ? '+' : '-');
  return out;
}

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double winding_step(const WindingVector& prev, const WindingVector& curr) {
  if (prev.degenerate() || curr.degenerate()) {
    throw std::invalid_argument("winding_step: degenerate winding vector");
  }
  const double cross = prev.dx * curr.dy - prev.dy * curr.dx;
  const double dot = prev.dx * curr.dx + prev.dy * curr.dy;
  // An antipodal flip cannot be assigned a rotation direction; it means the
  // sampling rate is too slow for this pair.
  if (dot < 0.0 && std::abs(cross) < 1e-12 * prev.norm() * curr.norm()) {
    throw std::invalid_argument("winding_step: ambiguous half-turn step");
  }
  // atan2 gives the counter-clockwise-positive angle; the mode formalism is
  // clockwise-positive, so negate and re-wrap the -pi edge.
  double a = -std::atan2(cross, dot);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

WindingResult winding_result(const sim::Trajectory& traj_i,
                             const sim::Trajectory& traj_j) {
  if (traj_i.size() != traj_j.size()) {
    throw std::invalid_argument("winding_number: trajectory length mismatch");
  }
  if (traj_i.size() < 2) {
    throw std::invalid_argument("winding_number: need at least 2 samples");
  }
  double total = 0.0;
  double last = 0.0;
  WindingVector prev{traj_i[0].x - traj_j[0].x, traj_i[0].y - traj_j[0].y};
  for (std::size_t t = 1; t < traj_i.size(); ++t) {
    WindingVector curr{traj_i[t].x - traj_j[t].x, traj_i[t].y - traj_j[t].y};
    last = winding_step(prev, curr);
    total += last;
    prev = curr;
  }
  return {WindingNumber{total / (2.0 * kPi)}, last};
}

WindingNumber winding_number(const sim::Trajectory& traj_i,
                             const sim::Trajectory& traj_j) {
  return winding_result(traj_i, traj_j).lambda;
}

int winding_sign(const WindingNumber& lambda, double final_step_radians,
                 double eps) {
  if (lambda.value > eps) return 1;
  if (lambda.value < -eps) return -1;
  if (final_step_radians > 0.0) return 1;
  if (final_step_radians < 0.0) return -1;
  return 1;
}

namespace {

sim::Side resolve_arm(const sim::AgentState& s, const sim::IntersectionMap& map,
                      const char* what) {
  auto arm = map.nearest_arm(s.x, s.y);
  if (!arm) {
    throw std::invalid_argument(std::string("mode_of: ") + what +
                                " pose not on any intersection arm");
  }
  return *arm;
}

}  // namespace

Mode mode_of(const sim::JointTrajectory& episode,
             const sim::IntersectionMap& map) {
  const int n = episode.agent_count();
  if (n < 1 || episode.length() < 2) {
    throw std::invalid_argument("mode_of: episode too short");
  }
  Mode m;
  m.starts.reserve(n);
  m.dests.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto& traj = episode.agents[i];
    m.starts.push_back(resolve_arm(traj.states.front(), map, "start"));
    m.dests.push_back(resolve_arm(traj.states.back(), map, "end"));
  }
  m.signs.resize(pair_count(n), 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto r = winding_result(episode.agents[i], episode.agents[j]);
      m.signs[pair_index(i, j, n)] =
          static_cast<std::int8_t>(winding_sign(r.lambda, r.final_step));
    }
  }
  return m;
}

std::vector<Mode> enumerate_modes(const std::vector<sim::Side>& starts) {
  const int n = static_cast<int>(starts.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (starts[i] == starts[j]) {
        throw std::invalid_argument("enumerate_modes: duplicate start side");
      }
    }
  }
  // Destination choices per agent: the three sides other than its start.
  std::vector<std::array<sim::Side, 3>> choices(n);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (auto s : sim::kAllSides) {
      if (s != starts[i]) choices[i][c++] = s;
    }
  }
  const int np = pair_count(n);
  std::vector<Mode> out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  total <<= np;
  out.reserve(total);

  std::vector<int> dest_idx(n, 0);
  for (;;) {
    Mode base;
    base.starts = starts;
    base.dests.resize(n);
    for (int i = 0; i < n; ++i) base.dests[i] = choices[i][dest_idx[i]];
    for (int mask = 0; mask < (1 << np); ++mask) {
      Mode m = base;
      m.signs.resize(np);
      for (int k = 0; k < np; ++k) {
        m.signs[k] = (mask >> k) & 1 ? 1 : -1;
      }
      out.push_back(std::move(m));
    }
    int i = n - 1;
    while (i >= 0 && ++dest_idx[i] == 3) {
      dest_idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace mtp::topology
