#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "maxtsp/matching.hpp"
#include "maxtsp/metric.hpp"

namespace maxtsp {

// Vertex-disjoint simple cycles (each of length >= 3) covering every vertex.
// Canonical form: each cycle starts at its smallest vertex and continues
// toward the smaller of that vertex's two neighbours; cycles are ordered by
// their first vertex.
struct CycleCover {
  std::vector<std::vector<Vertex>> cycles;
  // Sum of consecutive distances including each closing edge, in cycle
  // order. Always equal to cover_weight(*this, inst) for the owning instance.
  double weight = 0.0;

  std::size_t cycle_count() const { return cycles.size(); }
};

// Sums dist over consecutive pairs (and the closing pair) of every cycle.
// Throws InvalidInput on an out-of-range vertex.
double cover_weight(const CycleCover& cover, const MetricInstance& inst);

// Validates that `cycles` partition the instance's vertices into cycles of
// length >= 3, canonicalizes them and fills in the weight. Throws
// InvalidInput otherwise.
CycleCover make_cover(std::vector<std::vector<Vertex>> cycles, const MetricInstance& inst);

// Rotates/reflects one cycle into canonical orientation.
void canonicalize_cycle(std::vector<Vertex>& cycle);

inline constexpr std::int64_t kDefaultScale = std::int64_t{1} << 20;

// Degree-2 gadget for one original edge {u, v} (u < v): edge-nodes node_u and
// node_v; gadget edges connect node_u to both copies of u and node_v to both
// copies of v, plus the internal edge (node_u, node_v) of weight 0.
struct EdgeGadget {
  Vertex u;
  Vertex v;
  int node_u;
  int node_v;
  // (u', node_u), (u'', node_u), (v', node_v), (v'', node_v), (node_u, node_v).
  std::array<std::size_t, 5> edges;
  std::int64_t weight;  // round(scale * dist(u, v))
};

// Node layout: u' = u, u'' = n + u, then two edge-nodes per original edge in
// lexicographic (u, v) order starting at 2n.
struct GadgetMap {
  std::int64_t scale = kDefaultScale;
  std::size_t n = 0;
  std::vector<EdgeGadget> gadgets;

  int first_copy(Vertex u) const { return u; }
  int second_copy(Vertex u) const { return static_cast<int>(n) + u; }
};

// Perfect matchings of the gadget graph correspond one-to-one with cycle
// covers: an edge is in the cover iff its internal gadget edge is unmatched,
// and the matching weight is twice the quantized cover weight.
// Throws InvalidInput when n < 3 or scale is not positive, or when a
// quantized distance does not fit the matching's weight range.
std::pair<WeightedGraph, GadgetMap> build_gadget(const MetricInstance& inst,
                                                 std::int64_t scale);

// Tight starting point for the matching search on a gadget: every internal
// edge matched, every vertex copy exposed.
MatchingWarmStart gadget_warm_start(const WeightedGraph& g, const GadgetMap& map);

// Recovers the cycle cover from a perfect matching of the gadget. Throws
// std::logic_error if any edge gadget is half-selected or a vertex does not
// end up with degree exactly 2.
CycleCover decode_cover(const Matching& m, const GadgetMap& map, const MetricInstance& inst);

// Maximum-weight cycle cover. Distances are quantized to round(scale * d)
// before the exact matching step, so the returned cover is optimal for the
// quantized weights and within n / scale of the true optimum. The returned
// weight is recomputed from the unquantized distances.
CycleCover max_cycle_cover(const MetricInstance& inst, std::int64_t scale = kDefaultScale);

}  // namespace maxtsp
