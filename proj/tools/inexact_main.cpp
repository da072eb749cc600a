#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "inexact/bench.hpp"
#include "inexact/errors.hpp"
#include "inexact/fgm.hpp"
#include "inexact/gm.hpp"
#include "inexact/mirror_prox.hpp"
#include "inexact/problems.hpp"
#include "inexact/serialize.hpp"
#include "inexact/trace_io.hpp"

namespace fs = std::filesystem;
using namespace inexact;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitError = 2;
constexpr const char* kOutputEnv = "INEXACT_OUTPUT_DIR";

struct InstanceArgs {
  std::string problem;
  std::vector<std::string> params;
  std::uint64_t seed = 42;

  void attach(CLI::App* cmd) {
    cmd->add_option("problem", problem, "Problem name")->required();
    cmd->add_option("-p,--param", params, "Problem parameter as key=value (repeatable)");
    cmd->add_option("--seed", seed, "Instance seed");
  }

  ProblemInstance build() const {
    std::map<std::string, double> p;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected key=value, got " + kv);
      p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return make_problem(problem, p, seed);
  }
};

// Flag beats environment beats file.
std::string resolve_output_dir(const std::string& flag, const std::string& from_file) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return from_file;
}

struct SolveArgs {
  InstanceArgs instance;
  std::string solver = "gm";
  double epsilon = 1e-2;
  double L0 = 1.0;
  double zeta = 2.0;
  double delta = 0.0;
  double delta_tilde = 0.0;
  int max_iterations = 1000;
  bool non_increasing = false;
  std::optional<double> fixed_L;
  std::string trace;
  bool no_timing = false;
};

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

int run_solve(const SolveArgs& a) {
  const auto inst = a.instance.build();
  std::ostringstream trace;
  if (a.solver == "gm" || a.solver == "fgm") {
    const ObjectiveModel* model = inst.objective();
    if (!model) fail(ErrorCode::kUnknownSolver, a.solver + " needs an objective instance");
    SolverRun run;
    if (a.solver == "gm") {
      GMConfig cfg;
      cfg.L0 = a.L0;
      cfg.zeta = a.zeta;
      cfg.delta_tilde = a.delta_tilde;
      cfg.max_iterations = a.max_iterations;
      cfg.non_increasing = a.non_increasing;
      cfg.fixed_L = a.fixed_L;
      cfg.keep_iterates = false;
      run = gm_solve(*model, *inst.setup, inst.q, inst.start, cfg);
    } else {
      FGMConfig cfg;
      cfg.L0 = a.L0;
      cfg.mu = model->mu;
      cfg.m = model->m;
      cfg.max_iterations = a.max_iterations;
      cfg.non_increasing = a.non_increasing;
      cfg.keep_iterates = false;
      run = fgm_solve(with_variant(*model, ModelVariant::kNorm), *inst.setup, inst.q, inst.start, cfg);
    }
    write_trace(run, trace);
    std::cerr << fmt::format("{} on {}: {} iterations, {} model evaluations, best f = {}\n", a.solver, inst.name,
                             run.iterations(), run.linesearch_evals, format_real(run.best_value));
  } else if (a.solver == "mirror_prox" || a.solver == "saddle_mirror_prox") {
    if (!inst.vi()) fail(ErrorCode::kUnknownSolver, a.solver + " needs a VI or saddle instance");
    MPConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.delta = a.delta;
    cfg.delta_tilde = a.delta_tilde;
    cfg.L0 = a.L0;
    cfg.non_increasing = a.non_increasing;
    cfg.fixed_L = a.fixed_L;
    cfg.max_iterations = a.max_iterations;
    cfg.on_budget = BudgetPolicy::kCensor;
    cfg.start = inst.start;
    cfg.keep_iterates = false;
    cfg.timing = !a.no_timing;
    if (!inst.reference.divergence_bound) fail(ErrorCode::kInvalidArgument, inst.name + " has no divergence bound");
    cfg.divergence_bound = *inst.reference.divergence_bound;
    MPRun run;
    std::optional<double> gap;
    if (a.solver == "saddle_mirror_prox") {
      if (!inst.saddle()) fail(ErrorCode::kUnknownSolver, "saddle_mirror_prox needs a saddle instance");
      auto sr = saddle_solve(*inst.saddle(), *inst.setup, inst.q, cfg);
      gap = sr.gap;
      run = std::move(sr.run);
    } else {
      run = mirror_prox_solve(*inst.vi(), *inst.setup, inst.q, cfg);
    }
    write_trace(run, trace);
    std::cerr << fmt::format("{} on {}: {} iterations{}, {} model evaluations, gap bound {}{}\n", a.solver, inst.name,
                             run.iterations(), run.censored ? " (censored)" : "", run.linesearch_evals,
                             format_real(run.gap_bound), gap ? ", gap " + format_real(*gap) : "");
  } else {
    fail(ErrorCode::kUnknownSolver, fmt::format("unknown solver '{}'", a.solver));
  }
  write_or_print(a.trace, trace.str());
  return 0;
}

struct BenchArgs {
  std::string spec_file;
  std::string output_dir;
  bool no_timing = false;
  bool traces = false;
  std::vector<std::string> plots;
};

int run_bench_cmd(const BenchArgs& a) {
  BenchSpec spec = load_bench_spec(a.spec_file);
  spec.output_dir = resolve_output_dir(a.output_dir, spec.output_dir);
  if (a.no_timing) spec.timing = false;
  if (a.traces) spec.write_traces = true;
  const auto report = run_bench(spec);
  for (const auto& kind : a.plots) {
    if (spec.output_dir.empty()) fail(ErrorCode::kInvalidArgument, "plot data needs an output directory");
    emit_plot_data(report, parse_plot_kind(kind), fs::path(spec.output_dir) / "plots");
  }
  if (spec.output_dir.empty()) std::cout << report.csv();
  for (const auto& o : report.acceptance)
    std::cerr << fmt::format("{} {} eps={} expected {} observed {}\n", o.passed ? "PASS" : "FAIL", o.row.arm,
                             format_real(o.row.epsilon), o.row.iterations,
                             o.observed ? std::to_string(*o.observed) : "none");
  return report.passed() ? 0 : kExitFailed;
}

struct ValidateArgs {
  InstanceArgs instance;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::string json;
};

int run_validate(const ValidateArgs& a) {
  const auto inst = a.instance.build();
  ValidationOptions opt;
  opt.samples = a.samples;
  opt.seed = a.seed;
  const auto report = validate_instance(inst, opt);
  for (const auto& c : report.checks)
    std::cout << fmt::format("{:<28} {:>12.3e}  {}\n", c.name, c.max_violation, c.passed ? "ok" : "FAIL");
  if (!a.json.empty()) write_or_print(a.json, report.to_json().dump(2) + "\n");
  return report.passed() ? 0 : kExitFailed;
}

struct GenArgs {
  InstanceArgs instance;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const auto inst = a.instance.build();
  const fs::path dir = resolve_output_dir(a.out, "");
  if (dir.empty()) fail(ErrorCode::kInvalidArgument, fmt::format("gen needs --out or {}", kOutputEnv));
  write_instance(inst, dir);
  std::cerr << fmt::format("wrote {} with {} blobs\n", (dir / "manifest.json").string(), inst.data.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact-model first-order solvers and benchmark harness"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on one instance and write its trace");
  solve.instance.attach(solve_cmd);
  solve_cmd->add_option("-s,--solver", solve.solver, "gm, fgm, mirror_prox or saddle_mirror_prox");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Target accuracy (Mirror-Prox)");
  solve_cmd->add_option("--L0", solve.L0, "Initial smoothness guess");
  solve_cmd->add_option("--zeta", solve.zeta, "Line-search factor (gm)");
  solve_cmd->add_option("--delta", solve.delta, "Model inexactness");
  solve_cmd->add_option("--delta-tilde", solve.delta_tilde, "Inner solve accuracy");
  solve_cmd->add_option("-n,--max-iterations", solve.max_iterations, "Iteration budget");
  solve_cmd->add_flag("--non-increasing", solve.non_increasing, "Never decrease the accepted L");
  solve_cmd->add_option("--fixed-L", solve.fixed_L, "Skip the line search and use this L");
  solve_cmd->add_option("-o,--trace", solve.trace, "Trace CSV path, '-' for stdout");
  solve_cmd->add_flag("--no-timing", solve.no_timing, "Zero the wallclock column");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a bench spec and check its acceptance rows");
  bench_cmd->add_option("spec", bench.spec_file, "Bench spec (JSON)")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("-o,--output-dir", bench.output_dir, fmt::format("Output directory (also {})", kOutputEnv));
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Zero the wallclock column");
  bench_cmd->add_flag("--traces", bench.traces, "Write per-cell trace CSVs");
  bench_cmd->add_option("--plot", bench.plots, "convergence, iterations_vs_eps or time_vs_eps (repeatable)");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check the model properties of an instance");
  validate.instance.attach(validate_cmd);
  validate_cmd->add_option("--samples", validate.samples, "Samples per check");
  validate_cmd->add_option("--check-seed", validate.seed, "Sampling seed");
  validate_cmd->add_option("--json", validate.json, "Write the report as JSON, '-' for stdout");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write an instance manifest and its data blobs");
  gen.instance.attach(gen_cmd);
  gen_cmd->add_option("-o,--out", gen.out, fmt::format("Output directory (also {})", kOutputEnv));

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve_cmd->parsed()) return run_solve(solve);
    if (bench_cmd->parsed()) return run_bench_cmd(bench);
    if (validate_cmd->parsed()) return run_validate(validate);
    return run_gen(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
