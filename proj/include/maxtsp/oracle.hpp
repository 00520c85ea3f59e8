#pragma once

#include <cstddef>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/matching.hpp"
#include "maxtsp/metric.hpp"

// Exponential-time exact references for small instances. They share no code
// with the optimizing path beyond the instance and cover types.
namespace maxtsp::oracle {

struct Tour {
  std::vector<Vertex> order;  // canonical cyclic order
  double weight = 0.0;
};

// Largest sizes each oracle accepts even when the caller raises its limit;
// beyond these the memory or time cost is no longer desk-scale.
inline constexpr std::size_t kHeldKarpHardCap = 22;
inline constexpr std::size_t kCycleCoverHardCap = 12;
inline constexpr std::size_t kMatchingHardCap = 20;

// Maximum-weight Hamiltonian cycle by subset dynamic programming,
// O(2^n n^2) time and O(2^n n) memory. Throws InvalidInput unless
// 3 <= n <= min(limit, kHeldKarpHardCap).
Tour held_karp_max(const MetricInstance& inst, std::size_t limit = 18);

// Maximum-weight cycle cover by exhaustive search over all partitions into
// cycles of length >= 3 and all cyclic orders of each part.
// Throws InvalidInput unless 3 <= n <= min(limit, kCycleCoverHardCap).
CycleCover brute_cycle_cover(const MetricInstance& inst, std::size_t limit = 10);

// Maximum-weight perfect matching by recursive pairing of the lowest
// uncovered node. Negative weights are allowed. Throws InvalidInput when the
// node count is odd, exceeds min(limit, kMatchingHardCap), or no perfect
// matching exists.
Matching brute_matching(const WeightedGraph& g, std::size_t limit = 12);

}  // namespace maxtsp::oracle
