#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/gph.hpp"
#include "maxtsp/metric.hpp"

namespace maxtsp {

// Largest n the benchmark accepts unless overridden: the gadget matching
// has about n^2 nodes, so runtime grows roughly like n^4 to n^6 beyond this.
inline constexpr std::size_t kPracticalLimit = 200;

struct BenchConfig {
  std::vector<std::size_t> ns;
  std::size_t seeds = 20;
  std::uint64_t first_seed = 0;
  std::size_t d = 2;
  Norm norm = Norm::kL2;
  double dim = 2.0;  // doubling dimension fed to the bound column
  std::int64_t scale = kDefaultScale;
  std::size_t max_n = kPracticalLimit;
  std::size_t opt_limit = 12;  // fill `opt` with the exact optimum up to this n
  std::size_t jobs = 1;        // worker threads; 0 picks hardware concurrency
  bool timing = false;         // emit t_cover_ms / t_patch_ms (non-deterministic)
};

struct ExperimentRecord {
  std::string instance_id;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  Norm norm = Norm::kL2;
  double w_cover = 0.0;
  double w_gph = 0.0;
  std::size_t k0 = 0;
  double err_ub = 0.0;  // 1 - w_gph / w_cover; certified since w_cover >= OPT
  double bound_theorem = 0.0;
  std::optional<double> opt;
  double t_cover_ms = 0.0;
  double t_patch_ms = 0.0;
};

struct TrialResult {
  ExperimentRecord record;
  GuaranteeReport guarantees;
  GphResult gph;
};

std::string instance_id(std::size_t n, std::size_t d, Norm norm, std::uint64_t seed);

// Generates the uniform instance for (n, seed), runs greedy patching and
// fills one record. Guarantees are audited, not enforced, so a violation is
// reported rather than thrown.
TrialResult run_trial(const BenchConfig& config, std::size_t n, std::uint64_t seed);

// One trial per (n, seed), sorted by (n, seed). Trials run on a bounded
// worker pool; results do not depend on the pool size. Throws InvalidInput
// for an empty or out-of-range n list or zero seeds.
std::vector<TrialResult> run_bench(const BenchConfig& config);

inline constexpr const char* kCsvHeader =
    "instance_id,seed,n,d,norm,w_cover,w_gph,k0,err_ub,bound_theorem,opt,t_cover_ms,"
    "t_patch_ms";

// Header plus one row per record. Reals use 9 significant digits; `opt` is
// empty when not computed and the timing columns are empty unless
// `timing` is set.
std::string bench_csv(const std::vector<TrialResult>& trials, bool timing);

}  // namespace maxtsp
