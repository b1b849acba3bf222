// SPDX-License-Identifier: Apache-2.0

#ifndef POLYCG_SCALING_HPP
#define POLYCG_SCALING_HPP

#include "polycg/types.hpp"

#include <vector>

namespace polycg {

// One timing measurement against a common baseline: T_p seconds on p
// processors, with (n0, T_n0) the smallest feasible run of the problem.
struct ScalingRecord {
  int p = 0;
  double t_p = 0.0;
  int n0 = 0;
  double t_n0 = 0.0;
};

struct ScalingPoint {
  int p = 0;
  double speedup = 0.0;     // S_p = T_n0 * n0 / T_p
  double efficiency = 0.0;  // E_p = S_p / p
};

// Pure arithmetic on provided timings; the harness does not itself run
// distributed. Requires a consistent (n0, T_n0) baseline in all records,
// p >= n0 >= 1 and positive times.
std::vector<ScalingPoint> compute_scaling(const std::vector<ScalingRecord>& records);

// One (nx, p, T) measurement of the FD-3D weak-scaling family, where the
// ideal cost law is T = O(nx^4 / p).
struct WeakPoint {
  Index nx = 0;
  int p = 0;
  double t = 0.0;
};

struct WeakRatio {
  WeakPoint from;
  WeakPoint to;
  double observed = 0.0;  // T_to / T_from
  double ideal = 0.0;     // (nx_to/nx_from)^4 * p_from/p_to
};

// Consecutive-pair ratio report; requires at least two entries.
std::vector<WeakRatio> weak_scaling_check(const std::vector<WeakPoint>& points);

}  // namespace polycg

#endif  // POLYCG_SCALING_HPP
