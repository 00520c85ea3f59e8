#include "maxtsp/metric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "maxtsp/errors.hpp"

namespace maxtsp {

std::string_view norm_name(Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return "L1";
    case Norm::kL2:
      return "L2";
    case Norm::kLinf:
      return "LINF";
  }
  return "?";
}

Norm parse_norm(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "L1") return Norm::kL1;
  if (upper == "L2") return Norm::kL2;
  if (upper == "LINF") return Norm::kLinf;
  throw InvalidInput("unknown norm '" + std::string(name) + "'");
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InvalidInput("point dimension must be positive");
  if (coords_.empty() || coords_.size() % dim_ != 0) {
    throw InvalidInput("point set needs a positive multiple of " +
                       std::to_string(dim_) + " coordinates");
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      throw InvalidInput("non-finite coordinate " + std::to_string(k % dim_) +
                         " of point " + std::to_string(k / dim_));
    }
  }
}

namespace {

double norm_distance(std::span<const double> a, std::span<const double> b,
                     Norm norm) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = std::abs(a[k] - b[k]);
    switch (norm) {
      case Norm::kL1:
        acc += diff;
        break;
      case Norm::kL2:
        acc += diff * diff;
        break;
      case Norm::kLinf:
        acc = std::max(acc, diff);
        break;
    }
  }
  return norm == Norm::kL2 ? std::sqrt(acc) : acc;
}

}  // namespace

MetricInstance MetricInstance::from_points(const PointSet& points, Norm norm) {
  if (points.size() == 0) throw InvalidInput("point set is empty");
  MetricInstance inst;
  inst.n_ = points.size();
  inst.dist_.assign(inst.n_ * inst.n_, 0.0);
  for (std::size_t i = 0; i < inst.n_; ++i) {
    for (std::size_t j = i + 1; j < inst.n_; ++j) {
      const double d = norm_distance(points.point(i), points.point(j), norm);
      if (!std::isfinite(d)) {
        throw InvalidInput("distance between points " + std::to_string(i) +
                           " and " + std::to_string(j) + " overflows");
      }
      inst.dist_[i * inst.n_ + j] = d;
      inst.dist_[j * inst.n_ + i] = d;
    }
  }
  inst.points_ = points;
  inst.norm_ = norm;
  return inst;
}

MetricInstance MetricInstance::from_matrix(
    const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw InvalidInput("distance matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) {
      throw InvalidInput("distance matrix row " + std::to_string(i) + " has " +
                         std::to_string(m[i].size()) + " entries, expected " +
                         std::to_string(n));
    }
  }
  const auto pair_name = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };
  MetricInstance inst;
  inst.n_ = n;
  inst.dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = m[i][j];
      if (!std::isfinite(d)) {
        throw InvalidInput("non-finite distance at " + pair_name(i, j));
      }
      if (d < 0.0) throw InvalidInput("negative distance at " + pair_name(i, j));
      if (i == j && d != 0.0) {
        throw InvalidInput("nonzero diagonal at " + pair_name(i, i));
      }
      if (j > i && d != m[j][i]) {
        throw InvalidInput("asymmetric distance at pair " + pair_name(i, j));
      }
      inst.dist_[i * n + j] = d;
    }
  }
  return inst;
}

double MetricInstance::max_distance() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

ValidationReport validate_metric(const MetricInstance& inst, double tol) {
  ValidationReport report;
  const auto n = static_cast<Vertex>(inst.size());
  for (Vertex i = 0; i < n; ++i) {
    if (inst(i, i) != 0.0) report.zero_diagonal = false;
    for (Vertex j = 0; j < n; ++j) {
      if (inst(i, j) < 0.0) report.nonnegative = false;
      if (inst(i, j) != inst(j, i)) report.symmetric = false;
    }
  }
  for (Vertex i = 0; i < n; ++i) {
    const auto from_i = inst.row(i);
    for (Vertex j = 0; j < n; ++j) {
      const auto from_j = inst.row(j);
      for (Vertex k = 0; k < n; ++k) {
        const double excess = from_i[k] - (from_i[j] + from_j[k]);
        if (excess > tol) {
          ++report.triangle_violations;
          report.worst_violation = std::max(report.worst_violation, excess);
        }
      }
    }
  }
  return report;
}

double default_triangle_tolerance(const MetricInstance& inst) {
  return 4.0 * std::numeric_limits<double>::epsilon() * inst.max_distance();
}

PointSet gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("gen_uniform: n must be positive");
  if (d == 0) throw InvalidInput("gen_uniform: d must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> coords(n * d);
  for (double& c : coords) {
    c = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return PointSet(d, std::move(coords));
}

}  // namespace maxtsp
