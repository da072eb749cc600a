#pragma once

#include <functional>
#include <optional>
#include <span>

#include "inexact/feasible_set.hpp"
#include "inexact/model.hpp"
#include "inexact/prox.hpp"
#include "inexact/solver_run.hpp"

namespace inexact {

enum class FGMMode { kProx, kFrankWolfe };

struct FGMConfig {
  double L0 = 1.0;
  double mu = 0.0;
  double m = 0.0;
  // delta_k and delta~_k by iteration index k = 0, 1, ...; empty means the
  // model's delta and 0.
  std::function<double(int)> delta_schedule;
  std::function<double(int)> delta_tilde_schedule;
  int max_iterations = 1000;
  int max_linesearch_per_iter = 60;
  FGMMode mode = FGMMode::kProx;
  // Target accuracy; drives delta_k and the stopping rule in Frank-Wolfe mode.
  double epsilon = 0.0;
  bool non_increasing = false;
  // Upper bound on V[u0](x*); enables bound_history.
  std::optional<double> divergence_bound;
  std::optional<Point> reference;
  bool keep_iterates = true;
};

// Largest root of L a^2 - c a - c A = 0 with c = 1 + A mu + A m.
double alpha_next(double A, double L_next, double mu, double m);

// max{ 1/4 (sum_{k<N} 1/sqrt(L_{k+1}))^2,
//      (1/L_1) prod_{k=1}^{N-1} (1 + sqrt((mu + m) / (4 L_{k+1})))^2 }.
double fgm_growth_lower_bound(std::span<const double> L_history, double mu, double m, int N);

SolverRun fgm_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                    const FGMConfig& config);

struct FWOptions {
  double L0 = 1.0;
  int max_iterations = 1000000;
  int max_linesearch_per_iter = 60;
};

// Accelerated conditional gradient: the prox step becomes an LMO with
// delta~_k = 2 R_Q^2, delta_k = eps alpha_{k+1} / (4 A_{k+1}); stops once
// A_N >= 6 R_Q^2 N / eps.
SolverRun universal_fw_solve(const ObjectiveModel& model, const FeasibleSet& q, const ProxSetup& setup,
                             const Point& x0, double epsilon, const FWOptions& options = {});

struct RestartOptions {
  // Declared smoothness; defaults to model.smoothness.
  std::optional<double> L;
  double delta_tilde = 0.0;
  int max_linesearch_per_iter = 60;
};

// Restarts of fgm_solve, ceil(sqrt(10 L / mu)) iterations per stage and
// ceil(log2(mu R0^2 / eps)) stages, for left relatively mu-strongly convex f.
SolverRun fgm_restart_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q,
                            const Point& x0, double R0_sq, double epsilon, const RestartOptions& options = {});

}  // namespace inexact
