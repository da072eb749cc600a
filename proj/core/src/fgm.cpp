#include "inexact/fgm.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "inexact/errors.hpp"

namespace inexact {

double alpha_next(double A, double L_next, double mu, double m) {
  require(A >= 0 && L_next > 0 && mu >= 0 && m >= 0, ErrorCode::kInvalidArgument, "alpha_next: invalid arguments");
  const double c = 1.0 + A * mu + A * m;
  return (c + std::sqrt(c * c + 4.0 * L_next * c * A)) / (2.0 * L_next);
}

double fgm_growth_lower_bound(std::span<const double> L_history, double mu, double m, int N) {
  require(N >= 1 && static_cast<std::size_t>(N) <= L_history.size(), ErrorCode::kInvalidArgument,
          "growth bound: N out of range");
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += 1.0 / std::sqrt(L_history[static_cast<std::size_t>(k)]);
  double prod = 1.0 / L_history[0];
  for (int k = 1; k < N; ++k) {
    const double f = 1.0 + std::sqrt((mu + m) / (4.0 * L_history[static_cast<std::size_t>(k)]));
    prod *= f * f;
  }
  return std::max(0.25 * sum * sum, prod);
}

SolverRun fgm_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                    const FGMConfig& config) {
  require(config.L0 > 0 && config.mu >= 0 && config.m >= 0, ErrorCode::kInvalidArgument, "fgm: invalid parameters");
  require(config.max_iterations >= 0 && config.max_linesearch_per_iter >= 0, ErrorCode::kInvalidArgument,
          "fgm: negative budget");
  require(setup.strongly_convex_1(), ErrorCode::kProxNotStronglyConvex, "fgm needs a 1-strongly convex prox setup");
  require(model.variant == ModelVariant::kNorm, ErrorCode::kInvalidArgument, "fgm needs a norm-variant model");
  require(q.contains(x0, 1e-8), ErrorCode::kInvalidArgument, "fgm: x0 is not in Q");
  const bool fw = config.mode == FGMMode::kFrankWolfe;
  double R_sq = 0.0;
  if (fw) {
    require(config.epsilon > 0, ErrorCode::kInvalidArgument, "Frank-Wolfe mode needs epsilon > 0");
    require(config.mu == 0 && config.m == 0, ErrorCode::kInvalidArgument, "Frank-Wolfe mode needs mu = m = 0");
    const auto diam = setup.divergence_diameter(q);
    require(q.bounded() && diam.has_value(), ErrorCode::kInvalidArgument,
            "Frank-Wolfe mode needs a bounded divergence on Q");
    R_sq = *diam;
  }

  SolverRun run;
  run.method = fw ? "fgm-fw" : "fgm";
  run.mode = fw ? "frank-wolfe" : "prox";
  run.mu = config.mu;
  run.m = config.m;

  Point x = setup.clamp_interior(x0);
  Point u = x;
  run.start = x;
  double A = 0.0;
  double L = config.L0;
  double weighted_delta = 0.0;
  double sum_delta_tilde = 0.0;
  const double V0 = fw ? R_sq : config.divergence_bound.value_or(0.0);
  const bool track_bound = fw || config.divergence_bound.has_value();
  run.converged = !fw;

  for (int k = 0; k < config.max_iterations; ++k) {
    double delta_k = config.delta_schedule ? config.delta_schedule(k) : model.delta;
    double dt_k = fw ? 2.0 * R_sq : (config.delta_tilde_schedule ? config.delta_tilde_schedule(k) : 0.0);
    double trial = config.non_increasing ? L : 0.5 * L;
    double alpha = 0.0, A_next = 0.0;
    Point x_next, u_next;
    for (int i = 0;; ++i) {
      ++run.linesearch_evals;
      alpha = alpha_next(A, trial, config.mu, config.m);
      A_next = A + alpha;
      const Point y = (alpha * u + A * x) / A_next;
      if (fw) delta_k = config.epsilon * alpha / (4.0 * A_next);
      ModelSlice slice = model.slice(y);
      if (fw) {
        require(slice.d_weight == 0 && !slice.remainder, ErrorCode::kInvalidArgument,
                "Frank-Wolfe mode needs a linear model");
        u_next = q.lmo(alpha * slice.linear);
      } else {
        Subproblem sub;
        sub.slice = std::move(slice);
        sub.scale = alpha;
        sub.prox = {{1.0 + A * config.mu + A * config.m, u}};
        if (config.mu > 0) sub.prox.push_back({alpha * config.mu, y});
        try {
          u_next = composite_argmin(setup, q, sub, {dt_k, ArgminOptions{}.max_inner_iterations}).solution;
        } catch (const SolverError& e) {
          if (e.code() == ErrorCode::kMaxInnerIterations) fail(ErrorCode::kInnerSolveFailed, e.what());
          throw;
        }
      }
      x_next = (alpha * u_next + A * x) / A_next;
      const double f_next = model.f_delta(x_next);
      const double f_y = model.f_delta(y);
      const double psi = model.psi(x_next, y);
      const double nrm = setup.norm(x_next - y);
      const double quad = 0.5 * trial * nrm * nrm;
      if (detail::holds(f_next, f_y + psi + quad + delta_k, {f_next, f_y, psi, quad})) {
        run.f_history.push_back(f_next);
        break;
      }
      if (i >= config.max_linesearch_per_iter)
        fail(ErrorCode::kLineSearchStalled, "fgm: acceptance test failed at iteration " + std::to_string(k + 1));
      trial *= 2.0;
    }

    L = trial;
    A = A_next;
    x = std::move(x_next);
    u = std::move(u_next);
    weighted_delta += A * delta_k;
    sum_delta_tilde += dt_k;
    run.L_history.push_back(L);
    run.A_history.push_back(A);
    run.alpha_history.push_back(alpha);
    run.delta_history.push_back(delta_k);
    run.delta_tilde_history.push_back(dt_k);
    run.evals_history.push_back(run.linesearch_evals);
    run.S += 1.0 / (L + config.m);
    if (config.keep_iterates) run.iterates.push_back(x);
    if (run.best_point.size() == 0 || run.f_history.back() < run.best_value) {
      run.best_point = x;
      run.best_value = run.f_history.back();
    }
    if (config.reference) run.V_to_ref.push_back(setup.bregman(setup.clamp_interior(x), *config.reference));
    if (track_bound) run.bound_history.push_back((V0 + 2.0 * weighted_delta + sum_delta_tilde) / A);
    if (fw && A >= 6.0 * R_sq * (k + 1) / config.epsilon) {
      run.converged = true;
      break;
    }
  }
  run.last_point = x;
  run.last_u = u;
  if (run.best_point.size() == 0) {
    run.best_point = x;
    run.best_value = model.f_delta(x);
  }
  run.delta = run.delta_history.empty() ? model.delta : run.delta_history.back();
  run.delta_tilde = run.delta_tilde_history.empty() ? 0.0 : run.delta_tilde_history.back();
  return run;
}

SolverRun universal_fw_solve(const ObjectiveModel& model, const FeasibleSet& q, const ProxSetup& setup,
                             const Point& x0, double epsilon, const FWOptions& options) {
  require(q.bounded(), ErrorCode::kUnsupportedSet, "Frank-Wolfe needs a bounded set with an LMO");
  FGMConfig cfg;
  cfg.L0 = options.L0;
  cfg.max_iterations = options.max_iterations;
  cfg.max_linesearch_per_iter = options.max_linesearch_per_iter;
  cfg.mode = FGMMode::kFrankWolfe;
  cfg.epsilon = epsilon;
  cfg.keep_iterates = false;
  return fgm_solve(with_variant(model, ModelVariant::kNorm), setup, q, x0, cfg);
}

SolverRun fgm_restart_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q,
                            const Point& x0, double R0_sq, double epsilon, const RestartOptions& options) {
  const double mu = model.mu;
  require(mu > 0, ErrorCode::kInvalidArgument, "restarted fgm needs mu > 0");
  require(R0_sq > 0 && epsilon > 0, ErrorCode::kInvalidArgument, "restarted fgm needs R0^2 > 0 and eps > 0");
  const auto declared = options.L ? options.L : model.smoothness;
  require(declared.has_value() && *declared > 0, ErrorCode::kInvalidArgument,
          "restarted fgm needs the smoothness constant L");
  const double L = *declared;
  const double c = std::ceil(std::sqrt(L / mu));
  const double budget = 4.0 * mu * std::sqrt(10.0) / L * (5.0 * model.delta * c * c * c + options.delta_tilde * L * c);
  if (budget > epsilon) fail(ErrorCode::kErrorBudgetViolated, "restarted fgm: delta and delta~ too large for eps");

  const int stage_len = static_cast<int>(std::ceil(std::sqrt(10.0 * L / mu)));
  const int stages = std::max(0, static_cast<int>(std::ceil(std::log2(mu * R0_sq / epsilon))));

  SolverRun run;
  run.method = "fgm-restart";
  run.mode = "prox";
  run.mu = mu;
  run.m = model.m;
  run.delta = model.delta;
  run.delta_tilde = options.delta_tilde;
  Point x = setup.clamp_interior(x0);
  run.start = x;
  double L_warm = L;
  for (int p = 0; p < stages; ++p) {
    FGMConfig cfg;
    cfg.L0 = L_warm;
    cfg.m = model.m;
    cfg.max_iterations = stage_len;
    cfg.max_linesearch_per_iter = options.max_linesearch_per_iter;
    const double dt = options.delta_tilde;
    cfg.delta_tilde_schedule = [dt](int) { return dt; };
    cfg.keep_iterates = false;
    const SolverRun stage = fgm_solve(with_variant(model, ModelVariant::kNorm), setup, q, x, cfg);
    x = stage.last_point;
    L_warm = stage.L_history.back();
    StageRecord rec;
    rec.stage = p + 1;
    rec.iterations = stage.iterations();
    rec.max_L = *std::max_element(stage.L_history.begin(), stage.L_history.end());
    rec.R_sq = R0_sq * std::ldexp(1.0, -(p + 1));
    rec.contraction = 4.0 * rec.max_L / (mu * stage_len * static_cast<double>(stage_len));
    run.stages.push_back(rec);
    const long base_evals = run.linesearch_evals;
    for (int k = 0; k < stage.iterations(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      run.f_history.push_back(stage.f_history[i]);
      run.L_history.push_back(stage.L_history[i]);
      run.A_history.push_back(stage.A_history[i]);
      run.alpha_history.push_back(stage.alpha_history[i]);
      run.delta_history.push_back(stage.delta_history[i]);
      run.delta_tilde_history.push_back(stage.delta_tilde_history[i]);
      run.evals_history.push_back(base_evals + stage.evals_history[i]);
      run.stage_history.push_back(p + 1);
    }
    run.linesearch_evals += stage.linesearch_evals;
    run.S += stage.S;
  }
  run.last_point = x;
  run.last_u = x;
  run.best_point = x;
  run.best_value = model.f_delta(x);
  return run;
}

}  // namespace inexact
