#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace maxtsp {

using Vertex = int;

enum class Norm { kL1, kL2, kLinf };

std::string_view norm_name(Norm norm);
// Accepts "L1", "L2", "LINF" (case-insensitive). Throws InvalidInput.
Norm parse_norm(std::string_view name);

// n points in R^d, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  // Throws InvalidInput unless dim >= 1, coords.size() is a positive multiple
  // of dim and every coordinate is finite.
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

// Symmetric, zero-diagonal, non-negative distance matrix over n vertices.
// Immutable once built. Symmetry is structural: each unordered pair is
// stored from a single computation, so dist(i, j) == dist(j, i) exactly.
class MetricInstance {
 public:
  static MetricInstance from_points(const PointSet& points, Norm norm);
  // Rejects (InvalidInput) non-square input, non-finite or negative
  // entries, a nonzero diagonal, or any pair with m[i][j] != m[j][i].
  static MetricInstance from_matrix(const std::vector<std::vector<double>>& m);

  std::size_t size() const { return n_; }
  double operator()(Vertex a, Vertex b) const {
    return dist_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
  }
  std::span<const double> row(Vertex a) const {
    return {dist_.data() + static_cast<std::size_t>(a) * n_, n_};
  }
  double max_distance() const;

  // Set only for instances built from coordinates.
  const std::optional<PointSet>& points() const { return points_; }
  std::optional<Norm> norm() const { return norm_; }

 private:
  MetricInstance() = default;

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::optional<PointSet> points_;
  std::optional<Norm> norm_;
};

struct ValidationReport {
  bool symmetric = true;
  bool zero_diagonal = true;
  bool nonnegative = true;
  std::uint64_t triangle_violations = 0;
  // Largest dist(i,k) - dist(i,j) - dist(j,k) among violating triples.
  double worst_violation = 0.0;

  bool is_metric() const {
    return symmetric && zero_diagonal && nonnegative && triangle_violations == 0;
  }
};

// Exhaustive scan over all ordered triples; counts dist(i,k) > dist(i,j) +
// dist(j,k) + tol.
ValidationReport validate_metric(const MetricInstance& inst, double tol);

// 4 machine epsilons times the largest distance: absorbs rounding in norm
// evaluation while still catching genuine violations.
double default_triangle_tolerance(const MetricInstance& inst);

// n points uniform in [0,1]^d. Generator: std::mt19937_64 seeded with
// `seed`; each coordinate is the top 53 bits of one draw times 2^-53, so the
// output is bit-identical on every conforming platform.
PointSet gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace maxtsp
