#include "maxtsp/cycle_cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maxtsp/errors.hpp"

namespace maxtsp {

double cover_weight(const CycleCover& cover, const MetricInstance& inst) {
  const auto n = static_cast<Vertex>(inst.size());
  double total = 0.0;
  for (const auto& cycle : cover.cycles) {
    for (const Vertex v : cycle) {
      if (v < 0 || v >= n) throw InvalidInput("cycle vertex " + std::to_string(v) + " out of range");
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      total += inst(cycle[i], cycle[(i + 1) % cycle.size()]);
    }
  }
  return total;
}

void canonicalize_cycle(std::vector<Vertex>& cycle) {
  if (cycle.empty()) return;
  const auto lowest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), lowest, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1]) {
    std::reverse(cycle.begin() + 1, cycle.end());
  }
}

CycleCover make_cover(std::vector<std::vector<Vertex>> cycles, const MetricInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<char> seen(n, 0);
  std::size_t covered = 0;
  for (auto& cycle : cycles) {
    if (cycle.size() < 3) throw InvalidInput("cycle with fewer than 3 vertices");
    for (const Vertex v : cycle) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        throw InvalidInput("cycle vertex " + std::to_string(v) + " out of range");
      }
      if (seen[v]) throw InvalidInput("vertex " + std::to_string(v) + " appears twice");
      seen[v] = 1;
      ++covered;
    }
    canonicalize_cycle(cycle);
  }
  if (covered != n) throw InvalidInput("cycles do not cover every vertex");
  std::sort(cycles.begin(), cycles.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  CycleCover cover{std::move(cycles), 0.0};
  cover.weight = cover_weight(cover, inst);
  return cover;
}

std::pair<WeightedGraph, GadgetMap> build_gadget(const MetricInstance& inst,
                                                 std::int64_t scale) {
  const std::size_t n = inst.size();
  if (n < 3) throw InvalidInput("cycle cover needs at least 3 vertices");
  if (scale <= 0) throw InvalidInput("quantization scale must be positive");
  GadgetMap map;
  map.scale = scale;
  map.n = n;
  map.gadgets.reserve(n * (n - 1) / 2);
  std::vector<WeightedEdge> edges;
  edges.reserve(5 * n * (n - 1) / 2);
  int next_node = static_cast<int>(2 * n);
  // Weights appear doubled in dual sums, so keep them well below the cap.
  const double limit = static_cast<double>(WeightedGraph::kMaxAbsWeight) / 8.0;
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u) {
    for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v) {
      const double scaled = std::round(static_cast<double>(scale) * inst(u, v));
      if (!(scaled <= limit)) throw InvalidInput("quantized distance too large for scale");
      EdgeGadget gad{u, v, next_node, next_node + 1, {}, static_cast<std::int64_t>(scaled)};
      next_node += 2;
      const std::size_t base = edges.size();
      edges.push_back({map.first_copy(u), gad.node_u, gad.weight});
      edges.push_back({map.second_copy(u), gad.node_u, gad.weight});
      edges.push_back({map.first_copy(v), gad.node_v, gad.weight});
      edges.push_back({map.second_copy(v), gad.node_v, gad.weight});
      edges.push_back({gad.node_u, gad.node_v, 0});
      gad.edges = {base, base + 1, base + 2, base + 3, base + 4};
      map.gadgets.push_back(gad);
    }
  }
  return {WeightedGraph(next_node, std::move(edges)), std::move(map)};
}

MatchingWarmStart gadget_warm_start(const WeightedGraph& g, const GadgetMap& map) {
  MatchingWarmStart ws;
  ws.duals.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (const auto& gad : map.gadgets) {
    for (const Vertex x : {gad.u, gad.v}) {
      auto& y1 = ws.duals[map.first_copy(x)];
      y1 = std::max(y1, 2 * gad.weight);
      ws.duals[map.second_copy(x)] = y1;
    }
    ws.matched_edges.push_back(gad.edges[4]);
  }
  return ws;
}

CycleCover decode_cover(const Matching& m, const GadgetMap& map, const MetricInstance& inst) {
  const std::size_t n = map.n;
  std::vector<char> in_matching;
  std::size_t max_index = 0;
  for (const std::size_t k : m.edges) max_index = std::max(max_index, k);
  in_matching.assign(max_index + 1, 0);
  for (const std::size_t k : m.edges) in_matching[k] = 1;
  const auto matched = [&](std::size_t k) { return k < in_matching.size() && in_matching[k]; };

  std::vector<std::vector<Vertex>> adjacency(n);
  for (const auto& gad : map.gadgets) {
    const bool internal = matched(gad.edges[4]);
    const int u_side = matched(gad.edges[0]) + matched(gad.edges[1]);
    const int v_side = matched(gad.edges[2]) + matched(gad.edges[3]);
    if (internal) {
      if (u_side != 0 || v_side != 0) throw std::logic_error("gadget edge-node matched twice");
      continue;
    }
    if (u_side != 1 || v_side != 1) {
      throw std::logic_error("half-selected gadget for edge (" + std::to_string(gad.u) + "," +
                             std::to_string(gad.v) + ")");
    }
    adjacency[gad.u].push_back(gad.v);
    adjacency[gad.v].push_back(gad.u);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (adjacency[v].size() != 2) {
      throw std::logic_error("vertex " + std::to_string(v) + " has degree " +
                             std::to_string(adjacency[v].size()) + " in decoded cover");
    }
  }

  std::vector<char> visited(n, 0);
  std::vector<std::vector<Vertex>> cycles;
  for (Vertex start = 0; start < static_cast<Vertex>(n); ++start) {
    if (visited[start]) continue;
    std::vector<Vertex> cycle{start};
    visited[start] = 1;
    Vertex prev = start;
    Vertex cur = std::min(adjacency[start][0], adjacency[start][1]);
    while (cur != start) {
      if (visited[cur]) throw std::logic_error("decoded cover is not a union of cycles");
      visited[cur] = 1;
      cycle.push_back(cur);
      const Vertex next = adjacency[cur][0] == prev ? adjacency[cur][1] : adjacency[cur][0];
      prev = cur;
      cur = next;
    }
    cycles.push_back(std::move(cycle));
  }
  return make_cover(std::move(cycles), inst);
}

CycleCover max_cycle_cover(const MetricInstance& inst, std::int64_t scale) {
  const auto [graph, map] = build_gadget(inst, scale);
  const MatchingWarmStart ws = gadget_warm_start(graph, map);
  MatchingOptions options;
  options.warm_start = &ws;
  Matching m;
  try {
    m = max_weight_perfect_matching(graph, options);
  } catch (const InvalidInput& e) {
    // A complete graph always admits a cycle cover.
    throw std::logic_error(std::string("gadget matching failed: ") + e.what());
  }
  return decode_cover(m, map, inst);
}

}  // namespace maxtsp
