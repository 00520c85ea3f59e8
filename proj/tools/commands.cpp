#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "maxtsp/errors.hpp"
#include "maxtsp/gph.hpp"
#include "maxtsp/harness.hpp"
#include "maxtsp/instance_io.hpp"
#include "maxtsp/oracle.hpp"

namespace maxtsp::cli {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string real(double v) { return fmt("%.12g", v); }

struct LoadedInstance {
  MetricInstance inst;
  bool metric;
};

// Parses and validates; non-metric inputs are either refused (strict) or
// flagged so the caller stops enforcing metric guarantees.
LoadedInstance load(const std::string& path, bool strict, std::ostream& err) {
  MetricInstance inst = read_instance_file(path);
  const ValidationReport report = validate_metric(inst, default_triangle_tolerance(inst));
  if (!report.is_metric()) {
    const std::string msg = std::to_string(report.triangle_violations) +
                            " triangle-inequality violations (worst " +
                            real(report.worst_violation) + ")";
    if (strict) throw InvalidInput("input is not a metric: " + msg);
    err << "warning: " << msg << "; approximation guarantees do not apply\n";
  }
  return {std::move(inst), report.is_metric()};
}

void print_tour(std::ostream& out, const std::vector<Vertex>& tour) {
  out << "tour";
  for (const Vertex v : tour) out << ' ' << v;
  out << '\n';
}

struct GenArgs {
  std::size_t n = 0;
  std::size_t d = 2;
  std::uint64_t seed = 0;
  std::string norm = "L2";
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto inst = MetricInstance::from_points(gen_uniform(a.n, a.d, a.seed), parse_norm(a.norm));
  const std::string text = write_instance(inst);
  if (a.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(a.out, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    throw InvalidInput("cannot write '" + a.out + "'");
  }
  return kOk;
}

struct SolveArgs {
  std::string input;
  std::int64_t scale = kDefaultScale;
  bool trace = false;
  bool strict = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const auto [inst, metric] = load(a.input, a.strict, err);
  GphOptions options;
  options.scale = a.scale;
  options.enforce_guarantees = metric;
  const GphResult r = run_gph(inst, options);
  double sum_loss = 0.0;
  for (const auto& step : r.trace) sum_loss += step.candidate.loss;
  const GuaranteeReport g = check_guarantees(r, inst.size());

  out << "n " << inst.size() << '\n';
  out << "w_cover " << real(r.w_cover) << '\n';
  out << "w_gph " << real(r.w_tour) << '\n';
  out << "k0 " << r.k0 << '\n';
  out << "err_ub " << real(r.w_cover > 0 ? 1.0 - r.w_tour / r.w_cover : 0.0) << '\n';
  out << "sum_loss " << real(sum_loss) << '\n';
  out << "w_cover_minus_sum_loss " << real(r.telescoped_weight()) << '\n';
  out << "identity " << (g.telescoping ? "holds" : "FAILS") << '\n';
  out << "guarantees " << (!metric ? "void (non-metric input)" : g.ok() ? "ok" : "VIOLATED")
      << '\n';
  print_tour(out, r.tour);
  if (a.trace) {
    out << "trace step a1-b1 a2-b2 mode loss cycles_after\n";
    out << format_trace(r);
  }
  return kOk;
}

struct ExactArgs {
  std::string input;
  std::size_t hk_limit = 18;
  std::size_t cover_limit = 10;
  std::int64_t scale = kDefaultScale;
  bool strict = false;
};

int cmd_exact(const ExactArgs& a, std::ostream& out, std::ostream& err) {
  if (a.hk_limit > 18 || a.cover_limit > 10) {
    err << "warning: raised oracle limits; cost grows exponentially in n\n";
  }
  const auto [inst, metric] = load(a.input, a.strict, err);
  const std::size_t n = inst.size();
  const auto opt = oracle::held_karp_max(inst, a.hk_limit);
  GphOptions options;
  options.scale = a.scale;
  options.enforce_guarantees = metric;
  const GphResult r = run_gph(inst, options);

  out << "n " << n << '\n';
  out << "opt " << real(opt.weight) << '\n';
  if (n <= std::min(a.cover_limit, oracle::kCycleCoverHardCap)) {
    out << "brute_cover " << real(oracle::brute_cycle_cover(inst, a.cover_limit).weight) << '\n';
  }
  out << "w_cover " << real(r.w_cover) << '\n';
  out << "w_gph " << real(r.w_tour) << '\n';
  const double slack = static_cast<double>(n) / static_cast<double>(a.scale);
  const bool lower = r.w_tour <= opt.weight + 1e-9 * std::abs(opt.weight);
  const bool upper = opt.weight <= r.w_cover + slack + 1e-9 * std::abs(r.w_cover);
  out << "sandwich w_gph <= opt <= w_cover + n/S: " << (lower && upper ? "holds" : "FAILS")
      << '\n';
  print_tour(out, opt.order);
  return lower && upper ? kOk : kInternalError;
}

struct BoundArgs {
  std::size_t n = 0;
  double dim = 0.0;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  const BoundParams p = bound_params(a.n, a.dim);
  out << "bound " << fmt("%.10g", theoretical_error_bound(a.n, a.dim)) << '\n';
  if (p.main_branch) {
    out << "delta " << fmt("%.10g", p.delta) << "\nrho " << fmt("%.10g", p.rho) << '\n';
  } else {
    out << "branch fallback (n^(1/(2dim+1)) < 8): 1 - e^(-1/3)\n";
  }
  return kOk;
}

struct BenchArgs {
  BenchConfig config;
  std::string norm = "L2";
  std::string out;
};

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  return m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

int cmd_bench(BenchArgs a, std::ostream& out, std::ostream& err) {
  a.config.norm = parse_norm(a.norm);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw InvalidInput("cannot write '" + a.out + "'");
  }
  const auto trials = run_bench(a.config);
  const std::string csv = bench_csv(trials, a.config.timing);
  std::size_t violations = 0;
  for (const auto& t : trials) violations += t.guarantees.ok() ? 0 : 1;
  if (a.out.empty()) {
    out << csv;
  } else {
    if (!(file << csv) || !file.flush()) throw InvalidInput("cannot write '" + a.out + "'");
    std::map<std::size_t, std::vector<double>> by_n;
    for (const auto& t : trials) by_n[t.record.n].push_back(t.record.err_ub);
    out << "n median_err_ub bound_theorem\n";
    for (const auto& [n, errs] : by_n) {
      out << n << ' ' << fmt("%.9g", median(errs)) << ' '
          << fmt("%.9g", theoretical_error_bound(n, a.config.dim)) << '\n';
    }
  }
  if (violations) {
    err << "error: " << violations << " trial(s) violated a metric guarantee\n";
    return kInternalError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy patching for metric maximum TSP", "maxtsp"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate uniform random points in [0,1]^d");
  gen_cmd->add_option("--n", gen.n, "Number of points")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "Dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--norm", gen.norm, "L1, L2 or LINF");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run greedy patching on an instance file");
  solve_cmd->add_option("input", solve.input, "Instance file")->required();
  solve_cmd->add_option("--quantize-scale", solve.scale, "Distance quantization scale S")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--trace", solve.trace, "Print the patch trace");
  solve_cmd->add_flag("--strict-metric", solve.strict, "Reject non-metric inputs");

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Compare greedy patching with exact oracles");
  exact_cmd->add_option("input", exact.input, "Instance file")->required();
  exact_cmd->add_option("--hk-limit", exact.hk_limit, "Largest n for the Held-Karp oracle");
  exact_cmd->add_option("--cover-limit", exact.cover_limit,
                        "Largest n for the brute-force cycle cover");
  exact_cmd->add_option("--quantize-scale", exact.scale, "Distance quantization scale S")
      ->check(CLI::PositiveNumber);
  exact_cmd->add_flag("--strict-metric", exact.strict, "Reject non-metric inputs");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Print the worst-case relative error bound");
  bound_cmd->add_option("--n", bound.n, "Number of points")->required();
  bound_cmd->add_option("--dim", bound.dim, "Doubling dimension")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run seeded trials and write CSV");
  bench_cmd->add_option("--n", bench.config.ns, "Comma-separated instance sizes")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--seeds", bench.config.seeds, "Seeds per size");
  bench_cmd->add_option("--first-seed", bench.config.first_seed, "First seed");
  bench_cmd->add_option("--d", bench.config.d, "Point dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--norm", bench.norm, "L1, L2 or LINF");
  bench_cmd->add_option("--dim", bench.config.dim, "Doubling dimension for bound_theorem");
  bench_cmd->add_option("--quantize-scale", bench.config.scale, "Distance quantization scale S")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-n", bench.config.max_n, "Largest accepted n");
  bench_cmd->add_option("--opt-limit", bench.config.opt_limit,
                        "Fill the opt column with Held-Karp up to this n");
  bench_cmd->add_option("--jobs", bench.config.jobs, "Worker threads (0 = all cores)");
  bench_cmd->add_flag("--timing", bench.config.timing, "Fill the timing columns");
  bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*exact_cmd) return cmd_exact(exact, out, err);
    if (*bound_cmd) return cmd_bound(bound, out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace maxtsp::cli
