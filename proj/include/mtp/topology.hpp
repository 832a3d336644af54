#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mtp/sim/map.hpp"
#include "mtp/sim/types.hpp"

namespace mtp::topology {

// Relative position x_i - x_j of an agent pair at one timestep.
struct WindingVector {
  double dx = 0.0;
  double dy = 0.0;

  double norm() const;
  bool degenerate(double tol = 1e-9) const;
};

// Signed relative rotation accumulated over an episode, in revolutions.
// Clockwise rotation is positive (right-side passing).
struct WindingNumber {
  double value = 0.0;
};

// Joint crossing behavior: start side and destination side per agent plus
// a passing sign per unordered agent pair.
struct Mode {
  std::vector<sim::Side> starts;
  std::vector<sim::Side> dests;
  std::vector<std::int8_t> signs;  // +1 / -1, pairs (i<j) in lexicographic order

  int agent_count() const { return static_cast<int>(starts.size()); }
  int pair_count() const { return static_cast<int>(signs.size()); }

  bool operator==(const Mode& other) const = default;
  // Lexicographic over (starts, dests, signs); used for deterministic ordering.
  bool operator<(const Mode& other) const;

  std::string to_string() const;
};

// Index of unordered pair (i, j), i < j, in lexicographic pair order.
int pair_index(int i, int j, int n);
int pair_count(int n);

// Signed rotation of the winding vector from prev to curr, wrapped to
// (-pi, pi], clockwise-positive. Throws std::invalid_argument on a
// degenerate input vector or an ambiguous near-antipodal step.
double winding_step(const WindingVector& prev, const WindingVector& curr);

WindingNumber winding_number(const sim::Trajectory& traj_i,
                             const sim::Trajectory& traj_j);

// Sign of lambda with tie-break: |lambda| <= eps resolves by the sign of
// the final winding step, then defaults to +1.
int winding_sign(const WindingNumber& lambda, double final_step_radians,
                 double eps = 1e-6);

// Winding number plus the final step, so callers can apply the tie-break.
struct WindingResult {
  WindingNumber lambda;
  double final_step = 0.0;
};
WindingResult winding_result(const sim::Trajectory& traj_i,
                             const sim::Trajectory& traj_j);

// Classifies a full episode: start/destination sides by nearest arm
// centerline, passing signs from pairwise winding numbers.
Mode mode_of(const sim::JointTrajectory& episode, const sim::IntersectionMap& map);

// All modes consistent with the given start sides: 3 destinations per agent
// times 2 signs per pair. Start sides must be distinct.
std::vector<Mode> enumerate_modes(const std::vector<sim::Side>& starts);

}  // namespace mtp::topology
