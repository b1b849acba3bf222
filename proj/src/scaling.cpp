// SPDX-License-Identifier: Apache-2.0

#include "polycg/scaling.hpp"

#include <cmath>

namespace polycg {

std::vector<ScalingPoint> compute_scaling(const std::vector<ScalingRecord>& records) {
  if (records.empty()) throw std::invalid_argument("compute_scaling: no records");
  const int n0 = records.front().n0;
  const double t_n0 = records.front().t_n0;
  std::vector<ScalingPoint> points;
  points.reserve(records.size());
  for (const auto& r : records) {
    if (r.n0 != n0 || r.t_n0 != t_n0) {
      throw std::invalid_argument("compute_scaling: inconsistent baselines");
    }
    if (r.n0 < 1 || r.p < r.n0) {
      throw std::invalid_argument("compute_scaling: need p >= n0 >= 1");
    }
    if (!(r.t_p > 0.0) || !(r.t_n0 > 0.0)) {
      throw std::invalid_argument("compute_scaling: times must be positive");
    }
    const double s = r.t_n0 * static_cast<double>(r.n0) / r.t_p;
    points.push_back({r.p, s, s / static_cast<double>(r.p)});
  }
  return points;
}

std::vector<WeakRatio> weak_scaling_check(const std::vector<WeakPoint>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("weak_scaling_check: need at least two entries");
  }
  std::vector<WeakRatio> ratios;
  ratios.reserve(points.size() - 1);
  for (std::size_t k = 1; k < points.size(); ++k) {
    const WeakPoint& a = points[k - 1];
    const WeakPoint& b = points[k];
    if (!(a.t > 0.0) || !(b.t > 0.0) || a.nx < 1 || b.nx < 1 || a.p < 1 || b.p < 1) {
      throw std::invalid_argument("weak_scaling_check: entries must be positive");
    }
    const double grow = static_cast<double>(b.nx) / static_cast<double>(a.nx);
    const double ideal = std::pow(grow, 4) * static_cast<double>(a.p) / static_cast<double>(b.p);
    ratios.push_back({a, b, b.t / a.t, ideal});
  }
  return ratios;
}

}  // namespace polycg
