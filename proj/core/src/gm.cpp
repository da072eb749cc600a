#include "inexact/gm.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "inexact/errors.hpp"

namespace inexact {
namespace {

ArgminCertificate inner_solve(const ProxSetup& setup, const FeasibleSet& q, const Subproblem& p, double target) {
  try {
    return composite_argmin(setup, q, p, {target, ArgminOptions{}.max_inner_iterations});
  } catch (const SolverError& e) {
    if (e.code() == ErrorCode::kMaxInnerIterations) fail(ErrorCode::kInnerSolveFailed, e.what());
    throw;
  }
}

struct BoundState {
  double prod_q = 1.0;
  double harmonic = 0.0;
  double weighted = 0.0;

  void push(double L, double mu, double m) {
    const double q = detail::q_factor(L, mu, m);
    prod_q *= q;
    harmonic += 1.0 / (L + m);
    weighted = weighted * q + 1.0 / (L + m);
  }
  double value(double L_last, double m, double V0, double dt, double delta) const {
    return std::min((L_last + m) * prod_q, 1.0 / harmonic) * V0 + dt + 3.0 * delta;
  }
};

}  // namespace

SolverRun gm_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                   const GMConfig& config) {
  require(config.L0 > 0 && config.zeta > 1, ErrorCode::kInvalidArgument, "gm: need L0 > 0 and zeta > 1");
  require(config.max_iterations >= 0 && config.max_linesearch_per_iter >= 0 && config.delta_tilde >= 0,
          ErrorCode::kInvalidArgument, "gm: negative budget or accuracy");
  require(!config.fixed_L || *config.fixed_L > 0, ErrorCode::kInvalidArgument, "gm: fixed L must be positive");
  require(!config.target || config.divergence_bound, ErrorCode::kInvalidArgument,
          "gm: a bound target needs divergence_bound");
  require(model.variant == ModelVariant::kBregman, ErrorCode::kInvalidArgument, "gm needs a Bregman-variant model");
  require(q.contains(x0, 1e-8), ErrorCode::kInvalidArgument, "gm: x0 is not in Q");

  SolverRun run;
  run.method = "gm";
  run.mode = config.fixed_L ? "fixed" : (config.non_increasing ? "non-increasing" : "adaptive");
  run.delta = model.delta;
  run.delta_tilde = config.delta_tilde;
  run.mu = model.mu;
  run.m = model.m;

  Point x = setup.clamp_interior(x0);
  run.start = x;
  double fx = model.f_delta(x);
  double L = config.fixed_L.value_or(config.L0);
  BoundState bound;

  for (int k = 0; k < config.max_iterations; ++k) {
    Subproblem sub;
    sub.slice = model.slice(x);
    double trial = config.fixed_L ? L : (config.non_increasing ? L : L / config.zeta);
    Point next;
    double f_next = 0.0;
    for (int i = 0;; ++i) {
      ++run.linesearch_evals;
      sub.prox = {{trial, x}};
      next = inner_solve(setup, q, sub, config.delta_tilde).solution;
      f_next = model.f_delta(next);
      if (config.fixed_L) break;
      const double psi = model.psi(next, x);
      const double quad = trial * setup.bregman(x, next);
      if (detail::holds(f_next, fx + psi + quad + model.delta, {fx, f_next, psi, quad})) break;
      if (i >= config.max_linesearch_per_iter)
        fail(ErrorCode::kLineSearchStalled, "gm: acceptance test failed at iteration " + std::to_string(k + 1));
      trial *= config.zeta;
    }

    L = trial;
    x = next;
    fx = f_next;
    run.L_history.push_back(L);
    run.f_history.push_back(fx);
    run.evals_history.push_back(run.linesearch_evals);
    run.S += 1.0 / (L + model.m);
    if (config.keep_iterates) run.iterates.push_back(x);
    if (run.best_point.size() == 0 || fx < run.best_value) {
      run.best_point = x;
      run.best_value = fx;
    }
    if (config.reference) run.V_to_ref.push_back(setup.bregman(x, *config.reference));
    bound.push(L, model.mu, model.m);
    if (config.divergence_bound) {
      run.bound_history.push_back(bound.value(L, model.m, *config.divergence_bound, config.delta_tilde, model.delta));
      if (config.target && run.bound_history.back() <= *config.target) break;
    }
  }
  run.last_point = x;
  if (run.best_point.size() == 0) {
    run.best_point = x;
    run.best_value = fx;
  }
  run.converged = !config.target || (!run.bound_history.empty() && run.bound_history.back() <= *config.target);
  return run;
}

double gm_theoretical_bound(const SolverRun& run, const ObjectiveModel& model, double V0, int N) {
  if (N < 0) N = run.iterations();
  require(N >= 1 && N <= run.iterations(), ErrorCode::kInvalidArgument, "gm bound: N out of range");
  BoundState b;
  for (int i = 0; i < N; ++i) b.push(run.L_history[static_cast<std::size_t>(i)], model.mu, model.m);
  return b.value(run.L_history[static_cast<std::size_t>(N - 1)], model.m, V0, run.delta_tilde, model.delta);
}

double gm_argument_bound(const SolverRun& run, const ObjectiveModel& model, double V0, int N) {
  if (N < 0) N = run.iterations();
  require(N >= 1 && N <= run.iterations(), ErrorCode::kInvalidArgument, "gm bound: N out of range");
  BoundState b;
  for (int i = 0; i < N; ++i) b.push(run.L_history[static_cast<std::size_t>(i)], model.mu, model.m);
  return b.prod_q * V0 + (run.delta_tilde + 2.0 * model.delta) * b.weighted;
}

}  // namespace inexact
