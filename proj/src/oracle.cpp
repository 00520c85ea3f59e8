#include "maxtsp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>

#include "maxtsp/errors.hpp"

namespace maxtsp::oracle {
namespace {

void check_range(std::size_t n, std::size_t limit, std::size_t hard_cap, const char* what) {
  const std::size_t cap = std::min(limit, hard_cap);
  if (n < 3 || n > cap) {
    throw InvalidInput(std::string(what) + ": n=" + std::to_string(n) +
                       " outside [3, " + std::to_string(cap) + "]");
  }
}

double cycle_weight(const std::vector<Vertex>& cycle, const MetricInstance& inst) {
  double w = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) w += inst(cycle[i], cycle[(i + 1) % cycle.size()]);
  return w;
}

}  // namespace

Tour held_karp_max(const MetricInstance& inst, std::size_t limit) {
  const std::size_t n = inst.size();
  check_range(n, limit, kHeldKarpHardCap, "held_karp_max");
  // Paths start at vertex 0; bit i of a mask stands for vertex i + 1.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr double kUnset = -std::numeric_limits<double>::infinity();
  std::vector<double> best((full + 1) * m, kUnset);
  std::vector<std::uint8_t> parent((full + 1) * m, 0);
  const auto at = [m](std::size_t mask, std::size_t j) { return mask * m + j; };

  for (std::size_t j = 0; j < m; ++j) {
    best[at(std::size_t{1} << j, j)] = inst(0, static_cast<Vertex>(j + 1));
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const std::size_t rest = mask & ~(std::size_t{1} << j);
      if (rest == 0) continue;
      double value = kUnset;
      std::uint8_t from = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(rest & (std::size_t{1} << i))) continue;
        const double cand =
            best[at(rest, i)] + inst(static_cast<Vertex>(i + 1), static_cast<Vertex>(j + 1));
        if (cand > value) {
          value = cand;
          from = static_cast<std::uint8_t>(i);
        }
      }
      best[at(mask, j)] = value;
      parent[at(mask, j)] = from;
    }
  }

  double top = kUnset;
  std::size_t last = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double cand = best[at(full, j)] + inst(static_cast<Vertex>(j + 1), 0);
    if (cand > top) {
      top = cand;
      last = j;
    }
  }
  std::vector<Vertex> order;
  std::size_t mask = full;
  std::size_t j = last;
  while (mask) {
    order.push_back(static_cast<Vertex>(j + 1));
    const std::size_t rest = mask & ~(std::size_t{1} << j);
    if (rest) j = parent[at(mask, j)];
    mask = rest;
  }
  order.push_back(0);
  std::reverse(order.begin(), order.end());
  canonicalize_cycle(order);
  Tour tour{std::move(order), 0.0};
  tour.weight = cycle_weight(tour.order, inst);
  return tour;
}

CycleCover brute_cycle_cover(const MetricInstance& inst, std::size_t limit) {
  const std::size_t n = inst.size();
  check_range(n, limit, kCycleCoverHardCap, "brute_cycle_cover");
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  constexpr double kUnset = -std::numeric_limits<double>::infinity();

  // Heaviest simple cycle on each vertex subset of size >= 3, by trying every
  // cyclic order (first vertex fixed, one of each mirror pair).
  std::vector<double> cycle_best(full + 1, kUnset);
  std::vector<std::vector<Vertex>> cycle_order(full + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 3) continue;
    std::vector<Vertex> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask & (std::uint32_t{1} << v)) members.push_back(static_cast<Vertex>(v));
    }
    do {
      if (members[1] > members.back()) continue;
      const double w = cycle_weight(members, inst);
      if (w > cycle_best[mask]) {
        cycle_best[mask] = w;
        cycle_order[mask] = members;
      }
    } while (std::next_permutation(members.begin() + 1, members.end()));
  }

  // Best partition: the part holding the lowest remaining vertex is chosen
  // first, so every partition is visited exactly once.
  std::vector<double> cover_best(full + 1, kUnset);
  std::vector<std::uint32_t> first_part(full + 1, 0);
  cover_best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t others = mask & ~low;
    for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
      const std::uint32_t part = sub | low;
      const std::uint32_t rest = mask & ~part;
      if (cycle_best[part] != kUnset && cover_best[rest] != kUnset) {
        const double w = cycle_best[part] + cover_best[rest];
        if (w > cover_best[mask]) {
          cover_best[mask] = w;
          first_part[mask] = part;
        }
      }
      if (sub == 0) break;
    }
  }

  std::vector<std::vector<Vertex>> cycles;
  for (std::uint32_t mask = full; mask;) {
    const std::uint32_t part = first_part[mask];
    cycles.push_back(cycle_order[part]);
    mask &= ~part;
  }
  return make_cover(std::move(cycles), inst);
}

namespace {

struct MatchingSearch {
  const WeightedGraph& g;
  std::vector<std::vector<std::size_t>> incident;
  std::vector<char> covered;
  std::vector<std::size_t> chosen;
  std::int64_t weight = 0;
  bool found = false;
  std::vector<std::size_t> best_edges;
  std::int64_t best_weight = 0;

  void search() {
    const auto it = std::find(covered.begin(), covered.end(), 0);
    if (it == covered.end()) {
      if (!found || weight > best_weight) {
        found = true;
        best_weight = weight;
        best_edges = chosen;
      }
      return;
    }
    const auto u = static_cast<int>(it - covered.begin());
    covered[u] = 1;
    for (const std::size_t k : incident[u]) {
      const auto& e = g.edges()[k];
      const int v = e.u == u ? e.v : e.u;
      if (covered[v]) continue;
      covered[v] = 1;
      chosen.push_back(k);
      weight += e.weight;
      search();
      weight -= e.weight;
      chosen.pop_back();
      covered[v] = 0;
    }
    covered[u] = 0;
  }
};

}  // namespace

Matching brute_matching(const WeightedGraph& g, std::size_t limit) {
  const auto v = static_cast<std::size_t>(g.node_count());
  if (v % 2 != 0) throw InvalidInput("brute_matching: odd node count");
  if (v > std::min(limit, kMatchingHardCap)) {
    throw InvalidInput("brute_matching: " + std::to_string(v) + " nodes exceeds limit");
  }
  MatchingSearch s{g, std::vector<std::vector<std::size_t>>(v), std::vector<char>(v, 0), {}, 0,
                   false, {}, 0};
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    s.incident[g.edges()[k].u].push_back(k);
    s.incident[g.edges()[k].v].push_back(k);
  }
  s.search();
  if (!s.found) throw InvalidInput("brute_matching: no perfect matching exists");
  Matching m;
  m.edges = s.best_edges;
  std::sort(m.edges.begin(), m.edges.end());
  m.weight = s.best_weight;
  return m;
}

}  // namespace maxtsp::oracle
