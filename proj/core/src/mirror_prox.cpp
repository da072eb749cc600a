#include "inexact/mirror_prox.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "inexact/errors.hpp"
#include "inexact/rng.hpp"

namespace inexact {
namespace {

Point prox_step(const ProxSetup& setup, const FeasibleSet& q, ModelSlice slice, double L, const Point& anchor,
                double target) {
  Subproblem sub;
  sub.slice = std::move(slice);
  sub.prox = {{L, anchor}};
  try {
    return composite_argmin(setup, q, sub, {target, ArgminOptions{}.max_inner_iterations}).solution;
  } catch (const SolverError& e) {
    if (e.code() == ErrorCode::kMaxInnerIterations) fail(ErrorCode::kInnerSolveFailed, e.what());
    throw;
  }
}

std::pair<const FeasibleSet*, const FeasibleSet*> split_blocks(const FeasibleSet& q, Eigen::Index n1,
                                                               Eigen::Index n2) {
  const auto* p = std::get_if<FeasibleSet::Product>(&q.kind());
  if (p == nullptr || p->blocks.size() != 2 || p->blocks[0].dimension() != n1 || p->blocks[1].dimension() != n2)
    return {nullptr, nullptr};
  return {&p->blocks[0], &p->blocks[1]};
}

// Projected subgradient descent on h over `set`, several starts, best value.
template <class Value, class Grad>
double projected_subgradient_min(const FeasibleSet& set, const Vector& warm, Value value, Grad grad,
                                 const GapEstimateOptions& opt, std::uint64_t stream) {
  Rng rng(opt.seed, stream);
  const double diam = std::sqrt(set.diameter_sq());
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opt.starts; ++s) {
    Vector x = s == 0 ? warm : set.sample(rng);
    for (int t = 0; t < opt.iterations; ++t) {
      best = std::min(best, value(x));
      const Vector g = grad(x);
      const double gn = g.norm();
      if (gn == 0.0) break;
      x = set.project(x - (diam / (gn * std::sqrt(t + 1.0))) * g);
    }
    best = std::min(best, value(x));
  }
  return best;
}

}  // namespace

MPRun mirror_prox_solve(const VIModel& vi, const ProxSetup& setup, const FeasibleSet& q, const MPConfig& config) {
  require(config.epsilon > 0 && config.L0 > 0, ErrorCode::kInvalidArgument, "mirror prox: need eps > 0 and L0 > 0");
  require(config.delta >= 0 && config.delta_tilde >= 0, ErrorCode::kInvalidArgument, "mirror prox: negative errors");
  require(config.divergence_bound > 0, ErrorCode::kInvalidArgument, "mirror prox: divergence_bound must be positive");
  require(!config.fixed_L || *config.fixed_L > 0, ErrorCode::kInvalidArgument, "mirror prox: fixed L must be positive");

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  MPRun run;
  Point z = config.start ? setup.clamp_interior(*config.start) : setup.prox_center(q);
  require(q.contains(z, 1e-8), ErrorCode::kInvalidArgument, "mirror prox: start is not in Q");
  run.start = z;
  double L = config.fixed_L.value_or(config.L0);
  const double threshold = config.divergence_bound / config.epsilon;
  Vector weighted = Vector::Zero(z.size());
  double max_L = 0.0;
  run.key_inequality_violation = config.probes.empty() ? 0.0 : -std::numeric_limits<double>::infinity();

  while (run.S_N < threshold) {
    if (run.iterations() >= config.max_iterations) {
      if (config.on_budget == BudgetPolicy::kThrow)
        fail(ErrorCode::kIterationBudgetExceeded, "mirror prox: stopping rule not met within the budget");
      run.censored = true;
      break;
    }
    const ModelSlice at_z = vi.slice(z);
    const double scale = at_z.linear.cwiseAbs().dot(z.cwiseAbs());
    double trial = config.fixed_L ? L : (config.non_increasing ? L : 0.5 * L);
    Point w, z_next;
    for (int i = 0;; ++i) {
      ++run.linesearch_evals;
      w = prox_step(setup, q, at_z, trial, z, config.delta_tilde);
      z_next = prox_step(setup, q, vi.slice(w), trial, z, config.delta_tilde);
      if (config.fixed_L) break;
      const double lhs = vi.psi(z_next, z);
      const double a = vi.psi(z_next, w);
      const double b = vi.psi(w, z);
      const double quad = trial * (setup.bregman(z, w) + setup.bregman(w, z_next));
      if (detail::holds(lhs, a + b + quad + config.delta, {lhs, a, b, quad, scale})) break;
      if (i >= config.max_linesearch_per_iter)
        fail(ErrorCode::kLineSearchStalled,
             "mirror prox: acceptance test failed at iteration " + std::to_string(run.iterations() + 1));
      trial *= 2.0;
    }
    for (const Point& u : config.probes) {
      const double v = -vi.psi(u, w) - trial * (setup.bregman(z, u) - setup.bregman(z_next, u)) - config.delta -
                       2.0 * config.delta_tilde;
      run.key_inequality_violation = std::max(run.key_inequality_violation, v);
    }
    L = trial;
    max_L = std::max(max_L, L);
    run.S_N += 1.0 / L;
    weighted += w / L;
    run.L_history.push_back(L);
    run.S_history.push_back(run.S_N);
    run.evals_history.push_back(run.linesearch_evals);
    run.wallclock_ns.push_back(
        config.timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count() : 0);
    if (config.keep_iterates) {
      run.w_iterates.push_back(w);
      run.z_iterates.push_back(z_next);
    }
    z = std::move(z_next);
  }
  run.last_z = z;
  run.averaged_point = run.S_N > 0 ? Vector(weighted / run.S_N) : z;
  run.large_L0_warning = max_L > 0 && config.L0 > 2.0 * max_L;
  run.gap_bound = (run.S_N > 0 ? config.divergence_bound / run.S_N : std::numeric_limits<double>::infinity()) +
                  3.0 * config.delta + 2.0 * config.delta_tilde;
  return run;
}

std::optional<double> saddle_gap(const SaddleModel& saddle, const FeasibleSet& q, const Vector& u_hat,
                                 const Vector& v_hat, const GapEstimateOptions& options, bool* estimated) {
  const auto [q1, q2] = split_blocks(q, saddle.n_primal, saddle.n_dual);
  bool est = false;
  double upper = 0.0;
  if (saddle.gap.max_over_v) {
    upper = saddle.gap.max_over_v(u_hat);
  } else if (q2 != nullptr && saddle.grad_v) {
    est = true;
    upper = -projected_subgradient_min(
        *q2, v_hat, [&](const Vector& v) { return -saddle.f(u_hat, v); },
        [&](const Vector& v) -> Vector { return -saddle.grad_v(u_hat, v); }, options, 11);
  } else {
    return std::nullopt;
  }
  double lower = 0.0;
  if (saddle.gap.min_over_u) {
    lower = saddle.gap.min_over_u(v_hat);
  } else if (q1 != nullptr && saddle.grad_u) {
    est = true;
    lower = projected_subgradient_min(
        *q1, u_hat, [&](const Vector& u) { return saddle.f(u, v_hat); },
        [&](const Vector& u) -> Vector { return saddle.grad_u(u, v_hat); }, options, 12);
  } else {
    return std::nullopt;
  }
  if (estimated != nullptr) *estimated = est;
  return upper - lower;
}

SaddleRun saddle_solve(const SaddleModel& saddle, const ProxSetup& setup, const FeasibleSet& q,
                       const MPConfig& config, const GapEstimateOptions& gap_options) {
  require(q.dimension() == saddle.n_primal + saddle.n_dual, ErrorCode::kInvalidArgument,
          "saddle solve: set dimension does not match the split");
  SaddleRun out;
  out.run = mirror_prox_solve(saddle.vi, setup, q, config);
  out.u_hat = out.run.averaged_point.head(saddle.n_primal);
  out.v_hat = out.run.averaged_point.tail(saddle.n_dual);
  bool estimated = false;
  out.gap = saddle_gap(saddle, q, out.u_hat, out.v_hat, gap_options, &estimated);
  if (!out.gap) fail(ErrorCode::kGapNotComputable, "saddle solve: no closed-form inner problems and no sampler");
  out.gap_is_estimate = estimated;
  out.gap_bound = config.divergence_bound / out.run.S_N + 2.0 * config.delta + 2.0 * config.delta_tilde;
  out.run.gap_estimate = out.gap;
  out.run.gap_is_estimate = estimated;
  return out;
}

double restart_radius_sq(double R0_sq, int p, double delta, double delta_tilde, double mu) {
  const double h = std::ldexp(1.0, -p);
  return R0_sq * h + 2.0 * (1.0 - h) * (delta + 2.0 * delta_tilde) / mu;
}

MPRun restarted_mirror_prox(const VIModel& vi, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                            const RestartConfig& rc, const MPConfig& mp) {
  require(rc.mu > 0 && rc.R0_sq > 0 && rc.epsilon > 0, ErrorCode::kInvalidArgument,
          "restarted mirror prox: need mu, R0^2, eps > 0");
  const auto setup_omega = setup.omega_bound();
  if (!setup_omega) fail(ErrorCode::kOmegaMissing, "restarted mirror prox needs a setup with an Omega bound");
  const double omega = rc.Omega > 0 ? rc.Omega : *setup_omega;
  require(q.contains(x0, 1e-8), ErrorCode::kInvalidArgument, "restarted mirror prox: x0 is not in Q");

  SetupPtr base(&setup, [](const ProxSetup*) {});
  MPRun out;
  Point x = x0;
  out.start = x0;
  out.stage_points.push_back(x);
  double R_sq = rc.R0_sq;
  const double last = std::log2(rc.R0_sq / rc.epsilon);
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  for (int p = 0; p <= last; ++p) {
    const SetupPtr dp = scaled_setup(base, x, std::sqrt(R_sq));
    MPConfig cfg = mp;
    cfg.start = dp->prox_center(q);
    cfg.divergence_bound = omega;
    cfg.epsilon = rc.mu;
    cfg.probes.clear();
    const MPRun stage = mirror_prox_solve(vi, *dp, q, cfg);
    x = stage.averaged_point;
    R_sq = restart_radius_sq(rc.R0_sq, p + 1, mp.delta, mp.delta_tilde, rc.mu);

    StageRecord rec;
    rec.stage = p + 1;
    rec.iterations = stage.iterations();
    rec.max_L = *std::max_element(stage.L_history.begin(), stage.L_history.end());
    rec.R_sq = R_sq;
    out.stages.push_back(rec);
    out.stage_points.push_back(x);
    const long base_evals = out.linesearch_evals;
    for (int k = 0; k < stage.iterations(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      out.L_history.push_back(stage.L_history[i]);
      out.S_history.push_back(stage.S_history[i]);
      out.evals_history.push_back(base_evals + stage.evals_history[i]);
      out.stage_history.push_back(p + 1);
      out.wallclock_ns.push_back(
          mp.timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count() : 0);
    }
    out.linesearch_evals += stage.linesearch_evals;
    out.S_N += stage.S_N;
    out.censored = out.censored || stage.censored;
    out.large_L0_warning = out.large_L0_warning || stage.large_L0_warning;
  }
  out.averaged_point = x;
  out.last_z = x;
  return out;
}

}  // namespace inexact
