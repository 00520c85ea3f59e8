#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/metric.hpp"

namespace maxtsp {

// CROSS reconnects {a1,b2},{a2,b1}; PARALLEL reconnects {a1,a2},{b1,b2}.
enum class PatchMode { kCross, kParallel };

std::string_view patch_mode_name(PatchMode mode);

// Edge (cycle[position], cycle[position + 1 mod len]) of one cycle.
struct EdgeRef {
  std::size_t cycle = 0;
  std::size_t position = 0;
};

struct PatchLoss {
  double loss = 0.0;
  PatchMode mode = PatchMode::kCross;
};

struct PatchCandidate {
  EdgeRef e1;  // e1.cycle < e2.cycle
  EdgeRef e2;
  double loss = 0.0;
  PatchMode mode = PatchMode::kCross;
};

// dist(a1,b1) + dist(a2,b2) - max{dist(a1,b2) + dist(a2,b1),
// dist(a1,a2) + dist(b1,b2)}; ties go to CROSS. Negative values are gains.
// Throws InvalidInput unless the four vertices are distinct.
PatchLoss patch_loss(Vertex a1, Vertex b1, Vertex a2, Vertex b2, const MetricInstance& inst);

// Minimum-loss pair of edges from two different cycles. Ties resolve to the
// lexicographically smallest (e1.cycle, e1.position, e2.cycle, e2.position).
// Throws InvalidInput when the cover has fewer than two cycles.
PatchCandidate best_patch(const CycleCover& cover, const MetricInstance& inst);

// Merges the two cycles named by `cand` and returns the canonicalized cover.
// Throws InvalidInput for a candidate that does not fit the cover, and
// std::logic_error if the new weight drifts from old - loss by more than
// 1e-9 relative.
CycleCover apply_patch(const CycleCover& cover, const PatchCandidate& cand,
                       const MetricInstance& inst);

struct PatchStep {
  PatchCandidate candidate;
  Vertex a1, b1, a2, b2;
  double cover_weight_before = 0.0;  // w(C) when this patch was chosen
  std::size_t cycles_after = 0;
};

struct GphResult {
  std::vector<Vertex> tour;  // canonical cyclic order
  double w_cover = 0.0;      // weight of the initial cover C0
  double w_tour = 0.0;       // weight of `tour`, recomputed from distances
  std::size_t k0 = 0;        // cycle count of C0
  CycleCover initial_cover;
  std::vector<PatchStep> trace;
  double cover_ms = 0.0;  // wall-clock timings; not part of the result identity
  double patch_ms = 0.0;

  // w_cover minus the trace losses, summed in trace order.
  double telescoped_weight() const;
};

struct GphOptions {
  std::int64_t scale = kDefaultScale;
  // Throw std::logic_error when a metric guarantee (per-step loss bound,
  // e^(-1/3) ratio, k0 <= n/3) fails. Disable for non-metric inputs.
  bool enforce_guarantees = true;
};

// Greedy patching: start from a maximum-weight cycle cover, then repeatedly
// apply the best patch until a single Hamiltonian cycle remains.
// Throws InvalidInput when n < 3.
GphResult run_gph(const MetricInstance& inst, const GphOptions& options = {});

struct GuaranteeReport {
  std::size_t loss_bound_violations = 0;  // steps with loss > w(C)/n
  bool product_bound = true;              // w_tour >= (1-1/n)^(k0-1) w_cover
  bool exp_bound = true;                  // w_tour >= e^(-1/3) w_cover
  bool cycle_count_bound = true;          // k0 <= n/3
  bool telescoping = true;                // w_tour == w_cover - sum(losses)

  bool ok() const {
    return loss_bound_violations == 0 && product_bound && exp_bound && cycle_count_bound &&
           telescoping;
  }
};

// All comparisons allow 1e-9 relative slack for floating-point rounding.
GuaranteeReport check_guarantees(const GphResult& result, std::size_t n);

// Smallest inter-cycle vertex distance; any patch between those two cycles
// loses at most twice this value in a metric space.
double min_intercycle_distance(const CycleCover& cover, const MetricInstance& inst);

struct BoundParams {
  std::size_t n = 0;
  double dim = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  bool main_branch = false;
};

BoundParams bound_params(std::size_t n, double dim);

// Worst-case relative error of greedy patching in a space of doubling
// dimension `dim`: with delta = n^(-1/(2dim+1)) and rho = 4 delta,
// rho/(6(1-rho)) + 2delta/3 + (4/(rho delta))^dim / n when
// n^(1/(2dim+1)) >= 8, and 1 - e^(-1/3) otherwise.
// Throws InvalidInput when n < 3 or dim < 0.
double theoretical_error_bound(std::size_t n, double dim);

// One line per patch: step, both removed edges, mode, loss, cycles left.
std::string format_trace(const GphResult& result);

}  // namespace maxtsp
