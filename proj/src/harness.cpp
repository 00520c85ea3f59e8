#include "maxtsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "maxtsp/errors.hpp"
#include "maxtsp/oracle.hpp"

namespace maxtsp {

std::string instance_id(std::size_t n, std::size_t d, Norm norm, std::uint64_t seed) {
  return "uniform-d" + std::to_string(d) + "-" + std::string(norm_name(norm)) + "-n" +
         std::to_string(n) + "-s" + std::to_string(seed);
}

TrialResult run_trial(const BenchConfig& config, std::size_t n, std::uint64_t seed) {
  const MetricInstance inst =
      MetricInstance::from_points(gen_uniform(n, config.d, seed), config.norm);
  GphOptions options;
  options.scale = config.scale;
  options.enforce_guarantees = false;

  TrialResult trial;
  trial.gph = run_gph(inst, options);
  trial.guarantees = check_guarantees(trial.gph, n);

  auto& r = trial.record;
  r.instance_id = instance_id(n, config.d, config.norm, seed);
  r.seed = seed;
  r.n = n;
  r.d = config.d;
  r.norm = config.norm;
  r.w_cover = trial.gph.w_cover;
  r.w_gph = trial.gph.w_tour;
  r.k0 = trial.gph.k0;
  r.err_ub = r.w_cover > 0.0 ? 1.0 - r.w_gph / r.w_cover : 0.0;
  r.bound_theorem = theoretical_error_bound(n, config.dim);
  if (n <= config.opt_limit && n <= oracle::kHeldKarpHardCap) {
    r.opt = oracle::held_karp_max(inst, config.opt_limit).weight;
  }
  r.t_cover_ms = trial.gph.cover_ms;
  r.t_patch_ms = trial.gph.patch_ms;
  return trial;
}

std::vector<TrialResult> run_bench(const BenchConfig& config) {
  if (config.ns.empty()) throw InvalidInput("bench: empty n list");
  if (config.seeds == 0) throw InvalidInput("bench: seeds must be positive");
  if (config.d == 0) throw InvalidInput("bench: d must be positive");
  std::vector<std::size_t> ns = config.ns;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (const std::size_t n : ns) {
    if (n < 3) throw InvalidInput("bench: n must be at least 3");
    if (n > config.max_n) {
      throw InvalidInput("bench: n=" + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(config.max_n));
    }
  }

  struct Task {
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::size_t n : ns) {
    for (std::size_t s = 0; s < config.seeds; ++s) tasks.push_back({n, config.first_seed + s});
  }

  std::vector<TrialResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = run_trial(config, tasks[i].n, tasks[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

namespace {

void append_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

}  // namespace

std::string bench_csv(const std::vector<TrialResult>& trials, bool timing) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& t : trials) {
    const auto& r = t.record;
    out += r.instance_id + ',' + std::to_string(r.seed) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.d) + ',' + std::string(norm_name(r.norm)) + ',';
    append_real(out, r.w_cover);
    out += ',';
    append_real(out, r.w_gph);
    out += ',' + std::to_string(r.k0) + ',';
    append_real(out, r.err_ub);
    out += ',';
    append_real(out, r.bound_theorem);
    out += ',';
    if (r.opt) append_real(out, *r.opt);
    out += ',';
    if (timing) append_real(out, r.t_cover_ms);
    out += ',';
    if (timing) append_real(out, r.t_patch_ms);
    out += '\n';
  }
  return out;
}

}  // namespace maxtsp
