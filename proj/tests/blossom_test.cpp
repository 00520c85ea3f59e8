#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "maxtsp/errors.hpp"
#include "maxtsp/matching.hpp"
#include "maxtsp/oracle.hpp"

namespace maxtsp {
namespace {

WeightedGraph random_graph(std::mt19937_64& rng, int v, double density, std::int64_t lo,
                           std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> weight(lo, hi);
  std::bernoulli_distribution keep(density);
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < v; ++i) {
    for (int j = i + 1; j < v; ++j) {
      if (keep(rng)) edges.push_back({i, j, weight(rng)});
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return WeightedGraph(v, std::move(edges));
}

TEST(Blossom, SingleEdge) {
  const WeightedGraph g(2, {{0, 1, 7}});
  const auto m = max_weight_perfect_matching(g);
  EXPECT_EQ(m.weight, 7);
  EXPECT_EQ(m.edges, std::vector<std::size_t>{0});
}

TEST(Blossom, CompleteK4) {
  // Perfect matchings of K4: {01,23}=10, {02,13}=2, {03,12}=2.
  const WeightedGraph g(4, {{0, 1, 5}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 5}});
  const auto m = max_weight_perfect_matching(g);
  EXPECT_EQ(m.weight, 10);
  EXPECT_EQ(m.edges, (std::vector<std::size_t>{0, 5}));
}

TEST(Blossom, OddNodeCountRejected) {
  const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  EXPECT_THROW(max_weight_perfect_matching(g), InvalidInput);
}

TEST(Blossom, IsolatedNodeRejected) {
  const WeightedGraph g(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
  EXPECT_THROW(max_weight_perfect_matching(g), InvalidInput);
}

TEST(Blossom, PerfectPreferredOverHeavierPartial) {
  // The heavy middle edge would leave 0 and 3 uncovered.
  const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 100}, {2, 3, 1}});
  const auto m = max_weight_perfect_matching(g);
  EXPECT_EQ(m.weight, 2);
}

TEST(Blossom, EmptyGraph) {
  const auto m = max_weight_perfect_matching(WeightedGraph(0, {}));
  EXPECT_TRUE(m.edges.empty());
}

TEST(WeightedGraph, RejectsMalformedEdges) {
  EXPECT_THROW(WeightedGraph(2, {{0, 0, 1}}), InvalidInput);
  EXPECT_THROW(WeightedGraph(2, {{0, 2, 1}}), InvalidInput);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 1}, {1, 0, 2}}), InvalidInput);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, WeightedGraph::kMaxAbsWeight + 1}}), InvalidInput);
}

TEST(Blossom, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int v = 2 + 2 * static_cast<int>(rng() % 5);  // 2..10
    const double density = trial % 4 == 0 ? 0.5 : 1.0;
    const auto g = random_graph(rng, v, density, 0, 1000);
    Matching brute;
    try {
      brute = oracle::brute_matching(g);
    } catch (const InvalidInput&) {
      EXPECT_THROW(max_weight_perfect_matching(g), InvalidInput);
      continue;
    }
    const auto m = max_weight_perfect_matching(g);
    ASSERT_EQ(m.weight, brute.weight) << "trial " << trial;
    check_perfect_matching(g, m);
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(Blossom, NegativeWeightsAndMinimization) {
  // Maximizing negated weights gives the minimum perfect matching.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 4 + 2 * static_cast<int>(rng() % 4);
    const auto g = random_graph(rng, v, 1.0, 0, 1000);
    std::vector<WeightedEdge> negated = g.edges();
    for (auto& e : negated) e.weight = -e.weight;
    const WeightedGraph neg(v, negated);
    const auto min_m = max_weight_perfect_matching(neg);
    check_perfect_matching(neg, min_m);
    EXPECT_EQ(min_m.weight, oracle::brute_matching(neg).weight);
    EXPECT_LE(-min_m.weight, max_weight_perfect_matching(g).weight);
  }
}

TEST(Blossom, DeterministicForIdenticalInput) {
  std::mt19937_64 rng(5);
  const auto g = random_graph(rng, 60, 0.3, 0, 10);  // many ties
  const auto a = max_weight_perfect_matching(g);
  const auto b = max_weight_perfect_matching(g);
  EXPECT_EQ(a.edges, b.edges);
  check_perfect_matching(g, a);
}

TEST(Blossom, LargerGraphsYieldValidPerfectMatchings) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_graph(rng, 300, 0.05, -50, 5000);
    try {
      const auto m = max_weight_perfect_matching(g);
      check_perfect_matching(g, m);
    } catch (const InvalidInput&) {
      // Sparse random graphs can lack a perfect matching.
    }
  }
}

TEST(Blossom, WarmStartIsValidated) {
  const WeightedGraph g(4, {{0, 1, 5}, {2, 3, 5}, {0, 2, 1}, {1, 3, 1}});
  MatchingOptions opts;
  MatchingWarmStart ws{{5, 5, 5, 5}, {0}};
  opts.warm_start = &ws;
  const auto m = max_weight_perfect_matching(g, opts);
  EXPECT_EQ(m.weight, 10);

  MatchingWarmStart loose{{6, 5, 5, 5}, {0}};  // edge 0 not tight
  opts.warm_start = &loose;
  EXPECT_THROW(max_weight_perfect_matching(g, opts), InvalidInput);

  MatchingWarmStart infeasible{{1, 1, 1, 1}, {}};
  opts.warm_start = &infeasible;
  EXPECT_THROW(max_weight_perfect_matching(g, opts), InvalidInput);

  MatchingWarmStart parity{{6, 5, 6, 5}, {}};
  opts.warm_start = &parity;
  EXPECT_THROW(max_weight_perfect_matching(g, opts), InvalidInput);
}

TEST(Blossom, DebugDumpListsDuals) {
  const WeightedGraph g(4, {{0, 1, 5}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 5}});
  std::ostringstream log;
  MatchingOptions opts;
  opts.debug = &log;
  max_weight_perfect_matching(g, opts);
  EXPECT_NE(log.str().find("node 3"), std::string::npos);
}

}  // namespace
}  // namespace maxtsp
