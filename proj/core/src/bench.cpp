#include "inexact/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "inexact/errors.hpp"
#include "inexact/gm.hpp"
#include "inexact/mirror_prox.hpp"
#include "inexact/problems.hpp"
#include "inexact/rng.hpp"
#include "inexact/trace_io.hpp"

namespace inexact {

namespace {

const char* kind_name(ArmKind k) {
  switch (k) {
    case ArmKind::kAdaptiveIncreasing:
      return "adaptive-increasing";
    case ArmKind::kAdaptiveNonincreasing:
      return "adaptive-nonincreasing";
    case ArmKind::kFixedL:
      return "fixed-L";
  }
  return "";
}

ArmKind parse_kind(const std::string& s) {
  for (auto k : {ArmKind::kAdaptiveIncreasing, ArmKind::kAdaptiveNonincreasing, ArmKind::kFixedL})
    if (s == kind_name(k)) return k;
  fail(ErrorCode::kInvalidArgument, fmt::format("unknown arm kind '{}'", s));
}

std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_');
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

bool same_eps(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

std::string Arm::label() const {
  std::string out = kind_name(kind);
  if (kind == ArmKind::kFixedL && L) out += "(" + format_real(*L) + ")";
  if (zeta != 2.0) out += "(zeta=" + format_real(zeta) + ")";
  return out;
}

void validate_spec(const BenchSpec& spec) {
  require(!spec.epsilon_grid.empty(), ErrorCode::kInvalidArgument, "bench spec: epsilon_grid is empty");
  for (std::size_t i = 0; i < spec.epsilon_grid.size(); ++i) {
    require(spec.epsilon_grid[i] > 0, ErrorCode::kInvalidArgument, "bench spec: epsilon values must be positive");
    require(i == 0 || spec.epsilon_grid[i] < spec.epsilon_grid[i - 1], ErrorCode::kInvalidArgument,
            "bench spec: epsilon_grid must be strictly decreasing");
  }
  require(!spec.arms.empty(), ErrorCode::kInvalidArgument, "bench spec: no arms");
  for (const auto& a : spec.arms) {
    require(a.kind != ArmKind::kFixedL || (a.L && *a.L > 0), ErrorCode::kInvalidArgument,
            "bench spec: fixed-L arm needs L > 0");
    require(a.zeta > 1.0, ErrorCode::kInvalidArgument, "bench spec: zeta must exceed 1");
  }
  require(spec.iteration_cap > 0, ErrorCode::kInvalidArgument, "bench spec: iteration_cap must be positive");
  require(spec.settings.L0 > 0, ErrorCode::kInvalidArgument, "bench spec: L0 must be positive");
  require(!spec.problem.empty() && !spec.solver.empty(), ErrorCode::kInvalidArgument,
          "bench spec: problem and solver names are required");
}

BenchSpec parse_bench_spec(const nlohmann::json& j) {
  try {
    BenchSpec s;
    s.name = j.value("name", "bench");
    const auto& p = j.at("problem");
    s.problem = p.at("name").get<std::string>();
    if (p.contains("params"))
      for (const auto& [k, v] : p.at("params").items()) s.problem_params[k] = v.get<double>();
    s.seed = p.value("seed", std::uint64_t{42});
    const auto& sv = j.at("solver");
    s.solver = sv.at("name").get<std::string>();
    s.settings.L0 = sv.value("L0", 1.0);
    s.settings.delta_per_eps = sv.value("delta_per_eps", 0.0);
    s.settings.delta_fixed = sv.value("delta", 0.0);
    s.settings.delta_tilde = sv.value("delta_tilde", 0.0);
    s.settings.reference_iterations = sv.value("reference_iterations", 20000);
    s.settings.gap_samples = sv.value("gap_samples", 1000);
    s.settings.validate = sv.value("validate", true);
    s.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    for (const auto& a : j.at("arms")) {
      Arm arm;
      arm.kind = parse_kind(a.at("kind").get<std::string>());
      if (a.contains("L")) arm.L = a.at("L").get<double>();
      arm.zeta = a.value("zeta", 2.0);
      s.arms.push_back(arm);
    }
    s.output_dir = j.value("output_dir", "");
    s.timing = j.value("timing", true);
    s.iteration_cap = j.value("iteration_cap", 100000);
    s.write_traces = j.value("traces", false);
    if (j.contains("acceptance"))
      for (const auto& r : j.at("acceptance")) {
        AcceptanceRow row;
        row.arm = r.at("arm").get<std::string>();
        row.epsilon = r.at("epsilon").get<double>();
        row.iterations = r.at("iterations").get<int>();
        const std::string policy = r.value("policy", "factor2");
        require(policy == "exact" || policy == "factor2", ErrorCode::kInvalidArgument,
                "bench spec: policy must be exact or factor2");
        row.policy = policy == "exact" ? TolerancePolicy::kExact : TolerancePolicy::kFactor2;
        s.acceptance.push_back(row);
      }
    validate_spec(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, fmt::format("bench spec: {}", e.what()));
  }
}

BenchSpec load_bench_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot read " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, fmt::format("{}: {}", file.string(), e.what()));
  }
  return parse_bench_spec(j);
}

nlohmann::json spec_to_json(const BenchSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["problem"] = {{"name", s.problem}, {"params", s.problem_params}, {"seed", s.seed}};
  j["solver"] = {{"name", s.solver},
                 {"L0", s.settings.L0},
                 {"delta_per_eps", s.settings.delta_per_eps},
                 {"delta", s.settings.delta_fixed},
                 {"delta_tilde", s.settings.delta_tilde},
                 {"reference_iterations", s.settings.reference_iterations},
                 {"gap_samples", s.settings.gap_samples},
                 {"validate", s.settings.validate}};
  j["epsilon_grid"] = s.epsilon_grid;
  j["arms"] = nlohmann::json::array();
  for (const auto& a : s.arms) {
    nlohmann::json arm = {{"kind", kind_name(a.kind)}};
    if (a.L) arm["L"] = *a.L;
    if (a.zeta != 2.0) arm["zeta"] = a.zeta;
    j["arms"].push_back(arm);
  }
  j["output_dir"] = s.output_dir;
  j["timing"] = s.timing;
  j["iteration_cap"] = s.iteration_cap;
  j["traces"] = s.write_traces;
  j["acceptance"] = nlohmann::json::array();
  for (const auto& r : s.acceptance)
    j["acceptance"].push_back({{"arm", r.arm},
                               {"epsilon", r.epsilon},
                               {"iterations", r.iterations},
                               {"policy", r.policy == TolerancePolicy::kExact ? "exact" : "factor2"}});
  return j;
}

namespace {

struct Context {
  const BenchSpec& spec;
  const ProblemInstance& inst;
  std::optional<double> f_ref;
  std::optional<Point> x_ref;
};

void maybe_trace(const Context& ctx, const BenchRow& row, std::size_t eps_index, const auto& run) {
  if (!ctx.spec.write_traces || ctx.spec.output_dir.empty()) return;
  std::ostringstream out;
  write_trace(run, out);
  const auto file = std::filesystem::path(ctx.spec.output_dir) / "traces" /
                    fmt::format("{}_{}_eps{}.csv", file_stem(ctx.spec.name), file_stem(row.arm), eps_index + 1);
  write_text_file(file, out.str());
}

double delta_for(const SolverSettings& s, double eps) { return s.delta_per_eps * eps + s.delta_fixed; }

BenchRow run_gm_cell(const Context& ctx, const Arm& arm, double eps, std::size_t eps_index) {
  const ObjectiveModel& model = *ctx.inst.objective();
  const ProxSetup& setup = *ctx.inst.setup;
  GMConfig cfg;
  cfg.L0 = arm.L.value_or(ctx.spec.settings.L0);
  cfg.zeta = arm.zeta;
  cfg.delta_tilde = ctx.spec.settings.delta_tilde;
  cfg.non_increasing = arm.kind == ArmKind::kAdaptiveNonincreasing;
  if (arm.kind == ArmKind::kFixedL) cfg.fixed_L = arm.L;
  cfg.divergence_bound = setup.bregman(ctx.inst.start, *ctx.x_ref);
  cfg.target = eps;
  cfg.max_iterations = ctx.spec.iteration_cap;
  cfg.keep_iterates = false;
  const auto t0 = std::chrono::steady_clock::now();
  const SolverRun run = gm_solve(model, setup, ctx.inst.q, ctx.inst.start, cfg);
  const auto t1 = std::chrono::steady_clock::now();

  BenchRow row;
  row.epsilon = eps;
  row.arm = arm.label();
  row.iterations = run.iterations();
  row.model_evals = run.linesearch_evals;
  row.wallclock_ns =
      ctx.spec.timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() : 0;
  row.censored = !run.converged;
  row.bound_rhs = run.bound_history.empty() ? std::numeric_limits<double>::infinity() : run.bound_history.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(*ctx.f_ref));
  row.bound_satisfied = true;
  for (std::size_t k = 0; k < run.f_history.size(); ++k) {
    const double err = run.f_history[k] - *ctx.f_ref;
    row.bound_satisfied = row.bound_satisfied && err <= run.bound_history[k] + slack;
    row.convergence.emplace_back(double(k + 1), err);
  }
  maybe_trace(ctx, row, eps_index, run);
  return row;
}

MPConfig mp_config(const Context& ctx, const Arm& arm, double eps) {
  require(arm.zeta == 2.0, ErrorCode::kInvalidArgument, "mirror prox arms use zeta = 2");
  require(ctx.inst.reference.divergence_bound.has_value(), ErrorCode::kInvalidArgument,
          "mirror prox bench: the instance has no divergence bound");
  MPConfig cfg;
  cfg.epsilon = eps;
  cfg.delta = delta_for(ctx.spec.settings, eps);
  cfg.delta_tilde = ctx.spec.settings.delta_tilde;
  cfg.L0 = arm.L.value_or(ctx.spec.settings.L0);
  cfg.non_increasing = arm.kind == ArmKind::kAdaptiveNonincreasing;
  if (arm.kind == ArmKind::kFixedL) cfg.fixed_L = arm.L;
  cfg.divergence_bound = *ctx.inst.reference.divergence_bound;
  cfg.max_iterations = ctx.spec.iteration_cap;
  cfg.on_budget = BudgetPolicy::kCensor;
  cfg.start = ctx.inst.start;
  cfg.keep_iterates = false;
  cfg.timing = ctx.spec.timing;
  return cfg;
}

void fill_mp_row(BenchRow& row, const MPRun& run, const MPConfig& cfg, double tail) {
  row.iterations = run.iterations();
  row.model_evals = run.linesearch_evals;
  row.wallclock_ns = run.wallclock_ns.empty() ? 0 : run.wallclock_ns.back();
  row.censored = run.censored;
  for (int k = 0; k < run.iterations(); ++k)
    row.convergence.emplace_back(double(k + 1), cfg.divergence_bound / run.S_history[std::size_t(k)] + tail);
}

// max over sampled u (and the reference point) of psi(w_hat, u).
double restricted_gap_estimate(const Context& ctx, const Point& w_hat) {
  const VIModel& vi = *ctx.inst.vi();
  double worst = 0.0;
  if (ctx.inst.reference.x_star) worst = vi.psi(w_hat, *ctx.inst.reference.x_star);
  Rng rng(ctx.spec.seed, 31);
  for (int i = 0; i < ctx.spec.settings.gap_samples; ++i)
    worst = std::max(worst, vi.psi(w_hat, ctx.inst.sampling_region.sample(rng)));
  return worst;
}

BenchRow run_mp_cell(const Context& ctx, const Arm& arm, double eps, std::size_t eps_index) {
  const MPConfig cfg = mp_config(ctx, arm, eps);
  const MPRun run = mirror_prox_solve(*ctx.inst.vi(), *ctx.inst.setup, ctx.inst.q, cfg);
  BenchRow row;
  row.epsilon = eps;
  row.arm = arm.label();
  fill_mp_row(row, run, cfg, 3.0 * cfg.delta + 2.0 * cfg.delta_tilde);
  row.bound_rhs = run.gap_bound;
  row.bound_satisfied = restricted_gap_estimate(ctx, run.averaged_point) <= run.gap_bound + 1e-9;
  maybe_trace(ctx, row, eps_index, run);
  return row;
}

BenchRow run_saddle_cell(const Context& ctx, const Arm& arm, double eps, std::size_t eps_index) {
  const SaddleModel* saddle = ctx.inst.saddle();
  require(saddle != nullptr, ErrorCode::kUnknownSolver, "saddle_mirror_prox needs a saddle instance");
  const MPConfig cfg = mp_config(ctx, arm, eps);
  GapEstimateOptions gap;
  gap.seed = ctx.spec.seed;
  const SaddleRun sr = saddle_solve(*saddle, *ctx.inst.setup, ctx.inst.q, cfg, gap);
  BenchRow row;
  row.epsilon = eps;
  row.arm = arm.label();
  fill_mp_row(row, sr.run, cfg, 2.0 * cfg.delta + 2.0 * cfg.delta_tilde);
  row.bound_rhs = sr.gap_bound;
  row.bound_satisfied = sr.gap && *sr.gap <= sr.gap_bound + 1e-9;
  maybe_trace(ctx, row, eps_index, sr.run);
  return row;
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  validate_spec(spec);
  const bool known = spec.solver == "gm" || spec.solver == "mirror_prox" || spec.solver == "saddle_mirror_prox";
  if (!known) fail(ErrorCode::kUnknownSolver, fmt::format("unknown solver '{}'", spec.solver));
  const ProblemInstance inst = make_problem(spec.problem, spec.problem_params, spec.seed);

  BenchReport report;
  report.name = spec.name;
  report.problem = spec.problem;
  report.solver = spec.solver;
  if (spec.settings.validate) report.validation_passed = validate_instance(inst).passed();

  Context ctx{spec, inst, {}, {}};
  if (spec.solver == "gm") {
    require(inst.objective() != nullptr, ErrorCode::kUnknownSolver, "gm needs an objective instance");
    if (inst.reference.f_star && inst.reference.x_star) {
      ctx.f_ref = inst.reference.f_star;
      ctx.x_ref = inst.reference.x_star;
    } else {
      GMConfig ref;
      ref.L0 = spec.settings.L0;
      ref.max_iterations = spec.settings.reference_iterations;
      ref.keep_iterates = false;
      const SolverRun r = gm_solve(*inst.objective(), *inst.setup, inst.q, inst.start, ref);
      ctx.f_ref = r.best_value;
      ctx.x_ref = r.best_point;
    }
    report.f_ref = ctx.f_ref;
  } else {
    require(inst.vi() != nullptr, ErrorCode::kUnknownSolver, "mirror prox needs a VI or saddle instance");
  }

  for (const auto& arm : spec.arms)
    for (std::size_t e = 0; e < spec.epsilon_grid.size(); ++e) {
      const double eps = spec.epsilon_grid[e];
      if (spec.solver == "gm")
        report.rows.push_back(run_gm_cell(ctx, arm, eps, e));
      else if (spec.solver == "mirror_prox")
        report.rows.push_back(run_mp_cell(ctx, arm, eps, e));
      else
        report.rows.push_back(run_saddle_cell(ctx, arm, eps, e));
    }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return a.arm != b.arm ? a.arm < b.arm : a.epsilon > b.epsilon;
  });

  for (const auto& acc : spec.acceptance) {
    AcceptanceOutcome out{acc, std::nullopt, false};
    for (const auto& row : report.rows)
      if (row.arm == acc.arm && same_eps(row.epsilon, acc.epsilon)) {
        out.observed = row.iterations;
        const double ratio = double(row.iterations) / double(acc.iterations);
        out.passed = !row.censored && (acc.policy == TolerancePolicy::kExact ? row.iterations == acc.iterations
                                                                              : ratio <= 2.0 && ratio >= 0.5);
      }
    report.acceptance.push_back(out);
  }
  if (!spec.output_dir.empty()) write_bench_outputs(report, spec.output_dir);
  return report;
}

bool BenchReport::passed() const {
  return std::all_of(acceptance.begin(), acceptance.end(), [](const AcceptanceOutcome& a) { return a.passed; });
}

std::string BenchReport::csv() const {
  std::string out = "epsilon,arm,iterations,model_evals,wallclock_ns,bound_rhs,bound_satisfied,censored\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", format_real(r.epsilon), r.arm, r.iterations, r.model_evals,
                       r.wallclock_ns, format_real(r.bound_rhs), r.bound_satisfied, r.censored);
  return out;
}

nlohmann::json BenchReport::summary() const {
  nlohmann::json j;
  j["name"] = name;
  j["problem"] = problem;
  j["solver"] = solver;
  if (validation_passed) j["validation_passed"] = *validation_passed;
  if (f_ref) j["f_ref"] = *f_ref;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"epsilon", r.epsilon},
                         {"arm", r.arm},
                         {"iterations", r.iterations},
                         {"model_evals", r.model_evals},
                         {"bound_rhs", r.bound_rhs},
                         {"bound_satisfied", r.bound_satisfied},
                         {"censored", r.censored}});
  j["acceptance"] = nlohmann::json::array();
  for (const auto& a : acceptance) {
    nlohmann::json row = {{"arm", a.row.arm},
                          {"epsilon", a.row.epsilon},
                          {"expected", a.row.iterations},
                          {"policy", a.row.policy == TolerancePolicy::kExact ? "exact" : "factor2"},
                          {"passed", a.passed}};
    row["observed"] = a.observed ? nlohmann::json(*a.observed) : nlohmann::json(nullptr);
    j["acceptance"].push_back(row);
  }
  j["passed"] = passed();
  return j;
}

void write_bench_outputs(const BenchReport& report, const std::filesystem::path& dir) {
  const std::string stem = file_stem(report.name);
  write_text_file(dir / (stem + ".csv"), report.csv());
  write_text_file(dir / (stem + ".summary.json"), report.summary().dump(2) + "\n");
}

PlotKind parse_plot_kind(const std::string& s) {
  if (s == "convergence") return PlotKind::kConvergence;
  if (s == "iterations_vs_eps") return PlotKind::kIterationsVsEps;
  if (s == "time_vs_eps") return PlotKind::kTimeVsEps;
  fail(ErrorCode::kInvalidArgument, fmt::format("unknown plot kind '{}'", s));
}

std::vector<std::filesystem::path> emit_plot_data(const BenchReport& report, PlotKind kind,
                                                  const std::filesystem::path& dir) {
  std::vector<std::string> arms;
  for (const auto& r : report.rows)
    if (std::find(arms.begin(), arms.end(), r.arm) == arms.end()) arms.push_back(r.arm);

  const char* kind_label = kind == PlotKind::kConvergence       ? "convergence"
                           : kind == PlotKind::kIterationsVsEps ? "iterations_vs_eps"
                                                                : "time_vs_eps";
  std::vector<std::filesystem::path> files;
  for (const auto& arm : arms) {
    std::vector<std::pair<double, double>> pts;
    std::string x_label = "1/epsilon", y_label;
    if (kind == PlotKind::kConvergence) {
      const BenchRow* last = nullptr;
      for (const auto& r : report.rows)
        if (r.arm == arm && (!last || r.epsilon < last->epsilon)) last = &r;
      pts = last->convergence;
      x_label = "iteration";
      y_label = report.solver == "gm" ? "f - f_ref" : "gap bound";
    } else {
      for (const auto& r : report.rows)
        if (r.arm == arm)
          pts.emplace_back(1.0 / r.epsilon,
                           kind == PlotKind::kIterationsVsEps ? double(r.iterations) : 1e-9 * double(r.wallclock_ns));
      y_label = kind == PlotKind::kIterationsVsEps ? "iterations" : "seconds";
    }
    if (pts.empty()) continue;
    std::string body;
    for (const auto& [x, y] : pts) body += format_real(x) + " " + format_real(y) + "\n";
    const auto file = dir / fmt::format("{}_{}_{}.dat", file_stem(report.name), kind_label, file_stem(arm));
    write_text_file(file, body);
    const nlohmann::json meta = {{"kind", kind_label},       {"arm", arm},         {"x_label", x_label},
                                 {"y_label", y_label},       {"log_x", true},      {"log_y", true},
                                 {"points", pts.size()},     {"source", report.name}};
    write_text_file(file.string() + ".meta.json", meta.dump(2) + "\n");
    files.push_back(file);
  }
  return files;
}

}  // namespace inexact
