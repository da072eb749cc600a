#pragma once

#include <optional>

#include "inexact/feasible_set.hpp"
#include "inexact/model.hpp"
#include "inexact/prox.hpp"
#include "inexact/solver_run.hpp"

namespace inexact {

struct GMConfig {
  double L0 = 1.0;
  double delta_tilde = 0.0;
  int max_iterations = 1000;
  int max_linesearch_per_iter = 60;
  double zeta = 2.0;
  // Trial L starts at L_k instead of L_k / zeta, so accepted L never decreases.
  bool non_increasing = false;
  // Every step uses this L and skips the acceptance test.
  std::optional<double> fixed_L;
  // Upper bound on V[x0](x*); enables bound_history and `target`.
  std::optional<double> divergence_bound;
  std::optional<double> target;
  std::optional<Point> reference;
  bool keep_iterates = true;
};

SolverRun gm_solve(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                   const GMConfig& config);

// min{(L_N + m) Q_1^N, 1 / sum 1/(L_i + m)} V0 + delta_tilde + 3 delta over the
// first N accepted steps (all of them when N < 0).
double gm_theoretical_bound(const SolverRun& run, const ObjectiveModel& model, double V0, int N = -1);

// Q_1^N V0 + (delta_tilde + 2 delta) sum Q_{i+1}^N / (L_i + m).
double gm_argument_bound(const SolverRun& run, const ObjectiveModel& model, double V0, int N = -1);

}  // namespace inexact
