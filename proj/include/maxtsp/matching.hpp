#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace maxtsp {

struct WeightedEdge {
  int u;
  int v;
  std::int64_t weight;
};

// Simple undirected graph with integer edge weights.
class WeightedGraph {
 public:
  // Throws InvalidInput on out-of-range endpoints, self-loops, duplicate
  // unordered pairs, or |weight| > kMaxAbsWeight.
  WeightedGraph(int node_count, std::vector<WeightedEdge> edges);

  int node_count() const { return node_count_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  // Keeps dual arithmetic (sums of a few weights times small factors) well
  // inside int64.
  static constexpr std::int64_t kMaxAbsWeight = std::int64_t{1} << 60;

 private:
  int node_count_;
  std::vector<WeightedEdge> edges_;
};

struct Matching {
  // Indices into WeightedGraph::edges(), ascending.
  std::vector<std::size_t> edges;
  std::int64_t weight = 0;
};

// Optional starting point for the primal-dual search. Requirements, all
// checked (InvalidInput when violated):
//  - duals[v] + duals[u] >= 2 * w(u,v) for every edge;
//  - every listed edge is tight (equality) and the list is a matching;
//  - all nodes left exposed by the list have duals of equal parity.
// Vertex duals may have any sign since only perfect matchings are sought.
struct MatchingWarmStart {
  std::vector<std::int64_t> duals;
  std::vector<std::size_t> matched_edges;
};

struct MatchingOptions {
  const MatchingWarmStart* warm_start = nullptr;
  // When set, final vertex duals and nontrivial blossoms are dumped here.
  std::ostream* debug = nullptr;
};

// Maximum-weight perfect matching by Edmonds' blossom algorithm (primal-dual,
// O(V^3)). Throws InvalidInput when the node count is odd or no perfect
// matching exists. Output is a pure function of the input.
Matching max_weight_perfect_matching(const WeightedGraph& g,
                                     const MatchingOptions& options = {});

// Throws std::logic_error unless `m` is a perfect matching of `g` whose
// weight field equals the sum of its edges.
void check_perfect_matching(const WeightedGraph& g, const Matching& m);

}  // namespace maxtsp
