#include "maxtsp/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxtsp/errors.hpp"
#include "test_util.hpp"

namespace maxtsp {
namespace {

using testing::points2d;

// Exhaustive tour enumeration with vertex 0 fixed first.
double permutation_max(const MetricInstance& inst) {
  const auto n = static_cast<Vertex>(inst.size());
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  double best = -1.0;
  do {
    double w = 0.0;
    for (Vertex i = 0; i < n; ++i) w += inst(order[i], order[(i + 1) % n]);
    best = std::max(best, w);
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

TEST(HeldKarp, Triangle) {
  const auto t = oracle::held_karp_max(points2d({{0, 0}, {3, 0}, {0, 4}}));
  EXPECT_EQ(t.weight, 12.0);
  EXPECT_EQ(t.order, (std::vector<Vertex>{0, 1, 2}));
}

TEST(HeldKarp, UnitSquare) {
  const auto t = oracle::held_karp_max(points2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  EXPECT_NEAR(t.weight, 2.0 + 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(HeldKarp, LimitGuard) {
  const auto inst = testing::random_euclidean(19, 1);
  EXPECT_THROW(oracle::held_karp_max(inst, 18), InvalidInput);
  EXPECT_THROW(oracle::held_karp_max(points2d({{0, 0}, {1, 1}})), InvalidInput);
  EXPECT_THROW(oracle::held_karp_max(testing::random_euclidean(23, 1), 30), InvalidInput);
}

TEST(HeldKarp, AgreesWithPermutationEnumeration) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 6;  // 3..8
    const auto inst = MetricInstance::from_points(gen_uniform(n, 2, 900 + seed),
                                                  static_cast<Norm>(seed % 3));
    const auto t = oracle::held_karp_max(inst);
    EXPECT_NEAR(t.weight, permutation_max(inst), 1e-12) << "seed " << seed;
    std::vector<Vertex> sorted = t.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(sorted[i], static_cast<Vertex>(i));
  }
}

TEST(BruteCycleCover, SmallInstancesAreSingleTours) {
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto inst = testing::random_euclidean(n, 40 + n);
    const auto cover = oracle::brute_cycle_cover(inst);
    EXPECT_EQ(cover.cycle_count(), 1u);
    EXPECT_NEAR(cover.weight, oracle::held_karp_max(inst).weight, 1e-12);
  }
}

TEST(BruteCycleCover, TwoDistantTriangles) {
  const auto inst = testing::two_triangles(1000.0);
  const auto cover = oracle::brute_cycle_cover(inst);
  EXPECT_GE(cover.weight, oracle::held_karp_max(inst).weight - 1e-9);
  EXPECT_EQ(cover.weight, cover_weight(cover, inst));
}

TEST(BruteCycleCover, DominatesHeldKarp) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 8;
    const auto inst = testing::random_euclidean(n, 60 + seed, 1 + seed % 3);
    EXPECT_GE(oracle::brute_cycle_cover(inst).weight,
              oracle::held_karp_max(inst).weight - 1e-9);
  }
}

TEST(BruteCycleCover, LimitGuard) {
  EXPECT_THROW(oracle::brute_cycle_cover(testing::random_euclidean(11, 1)), InvalidInput);
  EXPECT_THROW(oracle::brute_cycle_cover(testing::random_euclidean(2, 1)), InvalidInput);
}

TEST(BruteMatching, Examples) {
  const WeightedGraph k4(4, {{0, 1, 5}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 5}});
  EXPECT_EQ(oracle::brute_matching(k4).weight, 10);
  EXPECT_EQ(oracle::brute_matching(WeightedGraph(2, {{0, 1, -5}})).weight, -5);
  const WeightedGraph path(4, {{0, 1, 3}, {1, 2, 9}, {2, 3, 4}});
  const auto m = oracle::brute_matching(path);
  EXPECT_EQ(m.edges, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(m.weight, 7);
}

TEST(BruteMatching, Guards) {
  EXPECT_THROW(oracle::brute_matching(WeightedGraph(3, {{0, 1, 1}})), InvalidInput);
  EXPECT_THROW(oracle::brute_matching(WeightedGraph(14, {})), InvalidInput);
  EXPECT_THROW(oracle::brute_matching(WeightedGraph(4, {{0, 1, 1}, {0, 2, 1}})), InvalidInput);
}

}  // namespace
}  // namespace maxtsp
