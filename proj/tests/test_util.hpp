#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "maxtsp/metric.hpp"

namespace maxtsp::testing {

inline MetricInstance points2d(const std::vector<std::pair<double, double>>& pts,
                               Norm norm = Norm::kL2) {
  std::vector<double> coords;
  for (const auto& [x, y] : pts) {
    coords.push_back(x);
    coords.push_back(y);
  }
  return MetricInstance::from_points(PointSet(2, coords), norm);
}

inline MetricInstance points1d(const std::vector<double>& xs) {
  return MetricInstance::from_points(PointSet(1, xs), Norm::kL2);
}

inline MetricInstance random_euclidean(std::size_t n, std::uint64_t seed, std::size_t d = 2) {
  return MetricInstance::from_points(gen_uniform(n, d, seed), Norm::kL2);
}

// Two 3-4-5 triangles whose clusters sit `gap` apart along x.
inline MetricInstance two_triangles(double gap) {
  return points2d({{0, 0}, {3, 0}, {0, 4}, {gap, 0}, {gap + 3, 0}, {gap, 4}});
}

}  // namespace maxtsp::testing
