#include "maxtsp/gph.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "maxtsp/errors.hpp"

namespace maxtsp {

std::string_view patch_mode_name(PatchMode mode) {
  return mode == PatchMode::kCross ? "CROSS" : "PARALLEL";
}

PatchLoss patch_loss(Vertex a1, Vertex b1, Vertex a2, Vertex b2, const MetricInstance& inst) {
  if (a1 == b1 || a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 || a2 == b2) {
    throw InvalidInput("patch needs four distinct vertices");
  }
  const double cross = inst(a1, b2) + inst(a2, b1);
  const double parallel = inst(a1, a2) + inst(b1, b2);
  const double removed = inst(a1, b1) + inst(a2, b2);
  if (cross >= parallel) return {removed - cross, PatchMode::kCross};
  return {removed - parallel, PatchMode::kParallel};
}

namespace {

Vertex edge_tail(const CycleCover& cover, const EdgeRef& e) {
  return cover.cycles[e.cycle][e.position];
}

Vertex edge_head(const CycleCover& cover, const EdgeRef& e) {
  const auto& cycle = cover.cycles[e.cycle];
  return cycle[(e.position + 1) % cycle.size()];
}

bool valid_ref(const CycleCover& cover, const EdgeRef& e) {
  return e.cycle < cover.cycles.size() && e.position < cover.cycles[e.cycle].size();
}

}  // namespace

PatchCandidate best_patch(const CycleCover& cover, const MetricInstance& inst) {
  if (cover.cycle_count() < 2) throw InvalidInput("best_patch needs at least two cycles");
  PatchCandidate best;
  bool found = false;
  for (std::size_t c1 = 0; c1 < cover.cycles.size(); ++c1) {
    const auto& cyc1 = cover.cycles[c1];
    for (std::size_t p1 = 0; p1 < cyc1.size(); ++p1) {
      const Vertex a1 = cyc1[p1];
      const Vertex b1 = cyc1[(p1 + 1) % cyc1.size()];
      for (std::size_t c2 = c1 + 1; c2 < cover.cycles.size(); ++c2) {
        const auto& cyc2 = cover.cycles[c2];
        for (std::size_t p2 = 0; p2 < cyc2.size(); ++p2) {
          const Vertex a2 = cyc2[p2];
          const Vertex b2 = cyc2[(p2 + 1) % cyc2.size()];
          const PatchLoss pl = patch_loss(a1, b1, a2, b2, inst);
          if (!found || pl.loss < best.loss) {
            best = {{c1, p1}, {c2, p2}, pl.loss, pl.mode};
            found = true;
          }
        }
      }
    }
  }
  return best;
}

CycleCover apply_patch(const CycleCover& cover, const PatchCandidate& cand,
                       const MetricInstance& inst) {
  if (!valid_ref(cover, cand.e1) || !valid_ref(cover, cand.e2)) {
    throw InvalidInput("stale patch candidate: edge index out of range");
  }
  if (cand.e1.cycle == cand.e2.cycle) throw InvalidInput("patch edges lie on the same cycle");
  const Vertex a1 = edge_tail(cover, cand.e1);
  const Vertex b1 = edge_head(cover, cand.e1);
  const Vertex a2 = edge_tail(cover, cand.e2);
  const Vertex b2 = edge_head(cover, cand.e2);
  const PatchLoss pl = patch_loss(a1, b1, a2, b2, inst);
  if (pl.loss != cand.loss || pl.mode != cand.mode) {
    throw InvalidInput("stale patch candidate: loss does not match the cover");
  }

  // Walk each cycle from the head of its removed edge back round to the tail.
  const auto open_path = [&](const EdgeRef& e) {
    const auto& cycle = cover.cycles[e.cycle];
    std::vector<Vertex> path;
    path.reserve(cycle.size());
    for (std::size_t i = 1; i <= cycle.size(); ++i) {
      path.push_back(cycle[(e.position + i) % cycle.size()]);
    }
    return path;
  };
  std::vector<Vertex> merged = open_path(cand.e1);  // b1 ... a1
  std::vector<Vertex> second = open_path(cand.e2);  // b2 ... a2
  if (cand.mode == PatchMode::kParallel) std::reverse(second.begin(), second.end());
  merged.insert(merged.end(), second.begin(), second.end());

  std::vector<std::vector<Vertex>> cycles;
  cycles.reserve(cover.cycles.size() - 1);
  for (std::size_t c = 0; c < cover.cycles.size(); ++c) {
    if (c != cand.e1.cycle && c != cand.e2.cycle) cycles.push_back(cover.cycles[c]);
  }
  cycles.push_back(std::move(merged));
  CycleCover next = make_cover(std::move(cycles), inst);

  const double expected = cover.weight - cand.loss;
  if (std::abs(next.weight - expected) > 1e-9 * std::abs(cover.weight)) {
    throw std::logic_error("patched cover weight drifted from old weight minus loss");
  }
  return next;
}

double GphResult::telescoped_weight() const {
  double w = w_cover;
  for (const auto& step : trace) w -= step.candidate.loss;
  return w;
}

GphResult run_gph(const MetricInstance& inst, const GphOptions& options) {
  const std::size_t n = inst.size();
  if (n < 3) throw InvalidInput("greedy patching needs at least 3 vertices");
  using Clock = std::chrono::steady_clock;
  const auto ms_since = [](Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
  };

  GphResult result;
  auto t0 = Clock::now();
  CycleCover cover = max_cycle_cover(inst, options.scale);
  result.cover_ms = ms_since(t0);
  result.initial_cover = cover;
  result.w_cover = cover.weight;
  result.k0 = cover.cycle_count();

  t0 = Clock::now();
  while (cover.cycle_count() > 1) {
    const PatchCandidate cand = best_patch(cover, inst);
    PatchStep step{cand,
                   edge_tail(cover, cand.e1),
                   edge_head(cover, cand.e1),
                   edge_tail(cover, cand.e2),
                   edge_head(cover, cand.e2),
                   cover.weight,
                   0};
    cover = apply_patch(cover, cand, inst);
    step.cycles_after = cover.cycle_count();
    result.trace.push_back(step);
  }
  result.patch_ms = ms_since(t0);
  result.tour = cover.cycles.front();
  result.w_tour = cover.weight;

  if (options.enforce_guarantees) {
    const GuaranteeReport report = check_guarantees(result, n);
    if (!report.ok()) {
      throw std::logic_error("greedy patching violated a metric guarantee; is the input metric?");
    }
  }
  return result;
}

GuaranteeReport check_guarantees(const GphResult& result, std::size_t n) {
  GuaranteeReport report;
  const double nd = static_cast<double>(n);
  const double tol = 1e-9 * std::abs(result.w_cover);
  for (const auto& step : result.trace) {
    if (step.candidate.loss > step.cover_weight_before / nd + 1e-9 * std::abs(step.cover_weight_before)) {
      ++report.loss_bound_violations;
    }
  }
  const double product = std::pow(1.0 - 1.0 / nd, static_cast<double>(result.k0) - 1.0);
  report.product_bound = result.w_tour >= product * result.w_cover - tol;
  report.exp_bound = result.w_tour >= std::exp(-1.0 / 3.0) * result.w_cover - tol;
  report.cycle_count_bound = 3 * result.k0 <= n;
  report.telescoping = std::abs(result.w_tour - result.telescoped_weight()) <= tol;
  return report;
}

double min_intercycle_distance(const CycleCover& cover, const MetricInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c1 = 0; c1 < cover.cycles.size(); ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < cover.cycles.size(); ++c2) {
      for (const Vertex a : cover.cycles[c1]) {
        for (const Vertex b : cover.cycles[c2]) best = std::min(best, inst(a, b));
      }
    }
  }
  return best;
}

BoundParams bound_params(std::size_t n, double dim) {
  if (n < 3) throw InvalidInput("error bound needs n >= 3");
  if (!(dim >= 0.0) || !std::isfinite(dim)) throw InvalidInput("dimension must be >= 0");
  const double exponent = 2.0 * dim + 1.0;
  const double nd = static_cast<double>(n);
  double root = std::pow(nd, 1.0 / exponent);
  // Snap exact integer roots (512^(1/3) = 8) that pow() lands next to.
  const double nearest = std::round(root);
  if (nearest > 0.0 && std::pow(nearest, exponent) == nd) root = nearest;
  BoundParams params;
  params.n = n;
  params.dim = dim;
  params.delta = 1.0 / root;
  params.rho = 4.0 * params.delta;
  params.main_branch = root >= 8.0;
  return params;
}

double theoretical_error_bound(std::size_t n, double dim) {
  const BoundParams p = bound_params(n, dim);
  if (!p.main_branch) return 1.0 - std::exp(-1.0 / 3.0);
  return p.rho / (6.0 * (1.0 - p.rho)) + 2.0 * p.delta / 3.0 +
         std::pow(4.0 / (p.rho * p.delta), dim) / static_cast<double>(n);
}

std::string format_trace(const GphResult& result) {
  std::string out;
  char buf[160];
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const auto& s = result.trace[i];
    std::snprintf(buf, sizeof buf, "%zu %d-%d %d-%d %s %.17g %zu\n", i + 1, s.a1, s.b1, s.a2,
                  s.b2, patch_mode_name(s.candidate.mode).data(), s.candidate.loss,
                  s.cycles_after);
    out += buf;
  }
  return out;
}

}  // namespace maxtsp
