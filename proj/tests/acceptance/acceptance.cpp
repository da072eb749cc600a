// One line per acceptance criterion; exits non-zero when a criterion outside
// --known-unattainable fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "inexact/bench.hpp"
#include "inexact/fgm.hpp"
#include "inexact/gm.hpp"
#include "inexact/mirror_prox.hpp"
#include "inexact/problems.hpp"
#include "inexact/rng.hpp"

using namespace inexact;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Quadratic {
  Matrix a;
  Vector b;
  double lmax = 0.0;
  double lmin = 0.0;

  double f(const Point& x) const { return 0.5 * x.dot(a * x) - b.dot(x); }
  Point minimizer() const { return a.ldlt().solve(b); }
  ObjectiveModel model(ModelVariant variant = ModelVariant::kNorm) const {
    const Matrix A = a;
    const Vector B = b;
    auto m = model_from_gradient([A, B](const Point& x) { return 0.5 * x.dot(A * x) - B.dot(x); },
                                 [A, B](const Point& x) -> Vector { return A * x - B; }, variant);
    m.smoothness = lmax;
    return m;
  }
};

Quadratic random_quadratic(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed, 0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) g.row(i) = rng.normal_vector(n).transpose();
  Quadratic q;
  q.a = g.transpose() * g / static_cast<double>(n) + 0.01 * Matrix::Identity(n, n);
  q.b = rng.normal_vector(n);
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(q.a).eigenvalues();
  q.lmax = ev.maxCoeff();
  q.lmin = ev.minCoeff();
  return q;
}

Quadratic conditioned_quadratic(Eigen::Index n, double lo, double hi, std::uint64_t seed) {
  Rng rng(seed, 0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) g.row(i) = rng.normal_vector(n).transpose();
  const Matrix qm = Eigen::HouseholderQR<Matrix>(g).householderQ();
  const Vector ev = Vector::LinSpaced(n, lo, hi);
  Quadratic q;
  q.a = qm * ev.asDiagonal() * qm.transpose();
  q.a = 0.5 * (q.a + q.a.transpose());
  q.b = rng.normal_vector(n);
  q.lmax = hi;
  q.lmin = lo;
  return q;
}

std::vector<double> dyadic_grid(int from, int to) {
  std::vector<double> g;
  for (int i = from; i <= to; ++i) g.push_back(std::ldexp(1.0, -i));
  return g;
}

BenchSpec resource_spec(std::vector<Arm> arms, std::vector<double> grid, double L0) {
  BenchSpec s;
  s.name = "resource_sharing";
  s.problem = "resource_sharing";
  s.problem_params = {{"n", 100}};
  s.solver = "mirror_prox";
  s.settings.L0 = L0;
  s.settings.validate = false;
  s.epsilon_grid = std::move(grid);
  s.arms = std::move(arms);
  s.timing = false;
  return s;
}

std::string counts(const BenchReport& r, const std::string& arm) {
  std::string out;
  for (const auto& row : r.rows)
    if (row.arm == arm) out += fmt::format("{}{}{}", out.empty() ? "" : "/", row.censored ? ">" : "", row.iterations);
  return out;
}

Outcome fixed_step_counts() {
  Arm fixed{ArmKind::kFixedL, 0.5};
  auto spec = resource_spec({fixed}, dyadic_grid(1, 4), 1.0);
  const int expected[] = {400, 800, 1600, 3200};
  for (std::size_t i = 0; i < 4; ++i)
    spec.acceptance.push_back({fixed.label(), spec.epsilon_grid[i], expected[i], TolerancePolicy::kExact});
  const auto report = run_bench(spec);
  return {report.passed(), "observed " + counts(report, fixed.label()) + ", expected 400/800/1600/3200"};
}

Outcome adaptive_counts() {
  Arm inc{ArmKind::kAdaptiveIncreasing};
  Arm nonin{ArmKind::kAdaptiveNonincreasing};
  const auto report = run_bench(resource_spec({inc, nonin}, dyadic_grid(1, 6), 0.05));
  int worst = 0, inc_last = 0, non_last = 0;
  bool censored = false;
  for (const auto& row : report.rows) {
    censored = censored || row.censored;
    if (row.arm == inc.label()) worst = std::max(worst, row.iterations);
    if (row.epsilon == report.rows.back().epsilon) (row.arm == inc.label() ? inc_last : non_last) = row.iterations;
  }
  const bool ok = !censored && worst <= 20 && non_last >= 5 * inc_last;
  return {ok, fmt::format("increasing {}; non-increasing {}; ratio at 1/64 = {:.1f}", counts(report, inc.label()),
                          counts(report, nonin.label()), double(non_last) / std::max(inc_last, 1))};
}

Outcome relative_smooth_bound() {
  const auto inst = make_quartic_relative(100, 42);
  const auto& model = *inst.objective();
  GMConfig ref;
  ref.max_iterations = 1000000;
  ref.keep_iterates = false;
  const auto r = gm_solve(model, *inst.setup, inst.q, inst.start, ref);
  const double f_ref = r.best_value;

  GMConfig cfg;
  cfg.max_iterations = 5000;
  cfg.keep_iterates = false;
  cfg.divergence_bound = inst.setup->bregman(inst.start, r.best_point);
  const auto run = gm_solve(model, *inst.setup, inst.q, inst.start, cfg);
  double worst = -std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < run.f_history.size(); ++k) {
    best = std::min(best, run.f_history[k]);
    worst = std::max(worst, best - f_ref - run.bound_history[k]);
  }
  return {worst <= 1e-9, fmt::format("N = 1..{}, max (f - f_ref - bound) = {:.3e}, f_ref = {:.12g}", run.iterations(),
                                     worst, f_ref)};
}

Outcome growth_lower_bound() {
  int checked = 0;
  double worst_rel = 0.0, worst_const = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto q = random_quadratic(5 + t % 16, 1000 + static_cast<std::uint64_t>(t));
    const bool strongly = t % 2 == 1;
    const bool constant = t % 5 == 0;
    FGMConfig cfg;
    cfg.max_iterations = 60;
    cfg.keep_iterates = false;
    cfg.mu = strongly ? q.lmin : 0.0;
    cfg.L0 = constant ? q.lmax : 1.0;
    cfg.non_increasing = constant;
    auto model = q.model();
    model.mu = cfg.mu;
    const auto run = fgm_solve(model, *euclidean_setup(), FeasibleSet::unconstrained(q.b.size()),
                               Vector::Zero(q.b.size()), cfg);
    for (int N = 1; N <= run.iterations(); ++N) {
      const double A = run.A_history[std::size_t(N - 1)];
      const double lower = fgm_growth_lower_bound(run.L_history, cfg.mu, 0.0, N);
      worst_rel = std::max(worst_rel, (lower - A) / lower);
      if (constant) worst_const = std::max(worst_const, (double(N) * N / (8.0 * q.lmax) - A) * 8.0 * q.lmax / N / N);
      ++checked;
    }
  }
  return {worst_rel <= 1e-12 && worst_const <= 1e-12,
          fmt::format("{} (run, N) pairs; max relative shortfall {:.2e} (growth bound), {:.2e} (N^2/8L)", checked,
                      worst_rel, worst_const)};
}

Outcome strongly_convex_rate() {
  const auto q = conditioned_quadratic(20, 1.0, 100.0, 77);
  auto model = q.model();
  model.mu = 1.0;
  FGMConfig cfg;
  cfg.mu = 1.0;
  cfg.max_iterations = 400;
  cfg.keep_iterates = false;
  const Point x0 = Vector::Zero(20);
  const Point xs = q.minimizer();
  const double fs = q.f(xs), V0 = 0.5 * (x0 - xs).squaredNorm();
  const auto run = fgm_solve(model, *euclidean_setup(), FeasibleSet::unconstrained(20), x0, cfg);
  double worst = 0.0;
  int checked = 0;
  for (int N = 2; N <= run.iterations(); ++N) {
    const double rhs = 2.0 * q.lmax * std::exp(-(N - 1) / 4.0 * std::sqrt(q.lmin / q.lmax)) * V0;
    // Below this the gap is rounding noise in f.
    if (rhs < 1e-10 * std::max(1.0, std::abs(fs))) break;
    worst = std::max(worst, (run.f_history[std::size_t(N - 1)] - fs) / rhs);
    ++checked;
  }
  return {checked > 0 && worst < 1.0, fmt::format("N = 2..{}, max (f - f*) / rhs = {:.3e}", checked + 1, worst)};
}

// Projection onto the unit simplex by sorting.
Vector simplex_projection(const Vector& c) {
  std::vector<double> s(c.data(), c.data() + c.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    cum += s[j];
    const double t = (cum - 1.0) / double(j + 1);
    if (s[j] - t > 0) tau = t;
  }
  return (c.array() - tau).max(0.0);
}

Outcome frank_wolfe() {
  const Eigen::Index n = 50;
  Rng rng(6, 0);
  const Vector c = 0.3 * rng.normal_vector(n);
  const auto model = model_from_gradient([c](const Point& x) { return 0.5 * (x - c).squaredNorm(); },
                                         [c](const Point& x) -> Vector { return x - c; });
  Vector x = Vector::Constant(n, 1.0 / n);
  for (int k = 0; k < 500; ++k) x = simplex_projection(x - 0.5 * (x - c));
  const double f_ref = 0.5 * (x - c).squaredNorm();
  const double eps = 1e-3;
  const auto run = universal_fw_solve(model, FeasibleSet::simplex(n), *euclidean_setup(), Vector::Constant(n, 1.0 / n),
                                      eps);
  const double cap = 128.0 * 1.0 * 1.0 / eps;
  const double diff = std::abs(run.f_history.back() - f_ref);
  return {run.converged && run.iterations() <= cap && diff <= eps,
          fmt::format("{} iterations (cap {:.0f}), |f - f_ref| = {:.3e}", run.iterations(), cap, diff)};
}

Outcome restart_halving() {
  auto vi = vi_model_from_operator([](const Point& x) -> Vector { return x; }, 0.0, 1.0);
  vi.smoothness = 1.0;
  RestartConfig rc;
  rc.mu = 1.0;
  rc.Omega = 1.0;
  rc.R0_sq = 1.0;
  rc.epsilon = 1e-3;
  MPConfig mp;
  mp.timing = false;
  const auto run =
      restarted_mirror_prox(vi, *euclidean_setup(), FeasibleSet::unit_ball(2), Point{{0.6, 0.8}}, rc, mp);
  bool ok = run.stage_points.size() >= 11;
  double worst = -1.0;
  for (std::size_t p = 1; p < run.stage_points.size() && p <= 10; ++p)
    worst = std::max(worst, run.stage_points[p].squaredNorm() - rc.R0_sq * std::ldexp(1.0, -int(p)));
  const int per_stage = static_cast<int>(std::ceil(2.0 * *vi.smoothness * rc.Omega / rc.mu));
  int most = 0;
  for (const auto& s : run.stages) most = std::max(most, s.iterations);
  ok = ok && worst <= 1e-9 && most <= per_stage;
  return {ok, fmt::format("{} stages, max (|x_p|^2 - R0^2 2^-p) = {:.3e}, stage iterations <= {} (cap {})",
                          run.stages.size(), worst, most, per_stage)};
}

Outcome model_validity() {
  std::string failing;
  for (const auto& name : problem_names()) {
    const auto report = validate_instance(make_problem(name, {}, 42));
    for (const auto& c : report.checks)
      if (!c.passed) failing += fmt::format(" {}:{}({:.2e})", name, c.name, c.max_violation);
  }
  return {failing.empty(), failing.empty() ? "all instances pass at 1000 samples" : "failing" + failing};
}

Outcome geometric_tables() {
  struct Reference {
    const char* problem;
    std::vector<int> counts;
  };
  const Reference references[] = {{"covering_circle", {6, 7, 8, 10, 11, 12}},
                          {"fermat_torricelli", {8, 9, 11, 12, 13, 15}},
                          {"best_approximation", {8, 9, 10, 12, 13, 15}}};
  bool ok = true;
  std::string detail;
  for (const auto& t : references) {
    BenchSpec s;
    s.name = t.problem;
    s.problem = t.problem;
    s.solver = "saddle_mirror_prox";
    s.settings.L0 = 1.0;
    s.settings.delta_per_eps = 0.5;
    s.settings.validate = false;
    s.epsilon_grid = dyadic_grid(1, 6);
    s.arms = {Arm{}};
    s.timing = false;
    s.iteration_cap = 2 * *std::max_element(t.counts.begin(), t.counts.end());
    for (std::size_t i = 0; i < t.counts.size(); ++i)
      s.acceptance.push_back({Arm{}.label(), s.epsilon_grid[i], t.counts[i], TolerancePolicy::kFactor2});
    const auto report = run_bench(s);
    ok = ok && report.passed();
    detail += fmt::format("{}{} {}", detail.empty() ? "" : "; ", t.problem, counts(report, Arm{}.label()));
  }
  return {ok, detail};
}

Outcome d_optimal() {
  const auto eye = make_d_optimal_from(Matrix::Identity(10, 10));
  Rng rng(3, 0);
  Point x0 = rng.uniform_vector(10, 0.5, 1.5);
  x0 /= x0.sum();
  GMConfig one;
  one.max_iterations = 50;
  const auto r0 = gm_solve(*eye.objective(), *eye.setup, eye.q, x0, one);
  const double err_x = (r0.best_point - *eye.reference.x_star).lpNorm<Eigen::Infinity>();
  const double err_f = std::abs(r0.best_value - *eye.reference.f_star);
  bool ok = err_x <= 1e-6 && err_f <= 1e-6;

  const auto inst = make_d_optimal(100, 200, 42);
  const auto& model = *inst.objective();
  GMConfig ref;
  ref.max_iterations = 300;
  ref.keep_iterates = false;
  const auto r = gm_solve(model, *inst.setup, inst.q, inst.start, ref);
  bool decreasing = true;
  for (std::size_t k = 1; k < r.f_history.size(); ++k) decreasing = decreasing && r.f_history[k] < r.f_history[k - 1];
  ok = ok && decreasing;

  const double V0 = inst.setup->bregman(inst.start, r.best_point);
  GMConfig adaptive;
  adaptive.zeta = 2.0;
  adaptive.keep_iterates = false;
  adaptive.divergence_bound = V0;
  adaptive.target = V0 / 100.0;
  GMConfig fixed = adaptive;
  fixed.fixed_L = 1.0;
  const auto ra = gm_solve(model, *inst.setup, inst.q, inst.start, adaptive);
  const auto rf = gm_solve(model, *inst.setup, inst.q, inst.start, fixed);
  ok = ok && ra.converged && rf.converged && ra.linesearch_evals < rf.linesearch_evals;
  return {ok, fmt::format("identity design error x {:.1e}, f {:.1e}; f strictly decreasing over {} steps: {}; "
                          "evals to bound V0/100: zeta=2 {} vs L=1 {}",
                          err_x, err_f, r.iterations(), decreasing ? "yes" : "no", ra.linesearch_evals,
                          rf.linesearch_evals)};
}

Outcome oracle_budget() {
  Rng rng(11, 0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const auto q = random_quadratic(4 + t, 2000 + static_cast<std::uint64_t>(t));
    GMConfig cfg;
    cfg.L0 = q.lmax * std::pow(10.0, rng.uniform(-3.0, 3.0));
    cfg.max_iterations = 100;
    cfg.keep_iterates = false;
    const auto run = gm_solve(q.model(ModelVariant::kBregman), *euclidean_setup(), FeasibleSet::unconstrained(q.b.size()),
                              Vector::Zero(q.b.size()), cfg);
    const double L_hat = *std::max_element(run.L_history.begin(), run.L_history.end());
    const double budget = 2.0 * run.iterations() + std::log2(2.0 * L_hat / cfg.L0);
    worst = std::max(worst, double(run.linesearch_evals) - budget);
  }
  return {worst <= 0.0, fmt::format("20 runs, max (evals - budget) = {:.2f}", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the inexact-model solvers"};
  std::vector<int> known;
  std::vector<int> only;
  app.add_option("--known-unattainable", known, "Criteria whose failure is reported but not fatal")->delimiter(',');
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"resource-sharing fixed-L stop counts", fixed_step_counts},
      {"resource-sharing adaptive counts", adaptive_counts},
      {"GM bound on the quartic instance", relative_smooth_bound},
      {"FGM growth of A_N", growth_lower_bound},
      {"FGM linear rate on a conditioned quadratic", strongly_convex_rate},
      {"universal Frank-Wolfe on the simplex", frank_wolfe},
      {"restarted Mirror-Prox halving", restart_halving},
      {"model validity of shipped instances", model_validity},
      {"geometric saddle counts within factor 2", geometric_tables},
      {"D-optimal design", d_optimal},
      {"GM oracle-call budget", oracle_budget},
  };
  const std::set<int> known_set(known.begin(), known.end());
  const std::set<int> only_set(only.begin(), only.end());
  int fatal = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only_set.empty() && !only_set.contains(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool tolerated = !o.passed && known_set.contains(id);
    if (!o.passed && !tolerated) ++fatal;
    std::printf("[%s] %d %s: %s (%.1fs)%s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs, tolerated ? " [known unattainable]" : "");
    std::fflush(stdout);
  }
  return fatal == 0 ? 0 : 1;
}
