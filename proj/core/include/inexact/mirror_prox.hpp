#pragma once

#include <optional>
#include <vector>

#include "inexact/feasible_set.hpp"
#include "inexact/model.hpp"
#include "inexact/prox.hpp"
#include "inexact/solver_run.hpp"

namespace inexact {

enum class BudgetPolicy {
  kThrow,   // IterationBudgetExceeded
  kCensor,  // return the run with censored = true
};

struct MPConfig {
  double epsilon = 1e-2;
  double delta = 0.0;
  double delta_tilde = 0.0;
  double L0 = 1.0;
  // Upper bound on max over Q of V[z0](x).
  double divergence_bound = 0.0;
  bool non_increasing = false;
  std::optional<double> fixed_L;
  int max_iterations = 100000;
  int max_linesearch_per_iter = 60;
  BudgetPolicy on_budget = BudgetPolicy::kThrow;
  // Replaces z0 = argmin d.
  std::optional<Point> start;
  bool keep_iterates = true;
  bool timing = true;
  // Points u at which the per-iteration inequality
  //   -psi(u, w_k) <= L (V[z_k](u) - V[z_{k+1}](u)) + delta + 2 delta~
  // is monitored.
  std::vector<Point> probes;
};

struct MPRun {
  std::vector<Point> z_iterates;
  std::vector<Point> w_iterates;
  std::vector<double> L_history;
  std::vector<double> S_history;
  std::vector<long> evals_history;
  std::vector<long> wallclock_ns;
  double S_N = 0.0;
  Point start;
  Point averaged_point;
  Point last_z;
  std::optional<double> gap_estimate;
  bool gap_is_estimate = false;
  // D / S_N + 3 delta + 2 delta~ (restricted gap) or D / S_N + 2 delta + 2 delta~ (saddle gap).
  double gap_bound = 0.0;
  long linesearch_evals = 0;
  bool censored = false;
  // L0 exceeds twice the largest accepted L.
  bool large_L0_warning = false;
  double key_inequality_violation = 0.0;

  // Restarted runs.
  std::vector<int> stage_history;
  std::vector<StageRecord> stages;
  std::vector<Point> stage_points;

  int iterations() const { return static_cast<int>(L_history.size()); }
};

MPRun mirror_prox_solve(const VIModel& vi, const ProxSetup& setup, const FeasibleSet& q, const MPConfig& config);

struct GapEstimateOptions {
  int starts = 10;
  int iterations = 2000;
  std::uint64_t seed = 42;
};

struct SaddleRun {
  MPRun run;
  Vector u_hat;
  Vector v_hat;
  std::optional<double> gap;
  bool gap_is_estimate = false;
  double gap_bound = 0.0;
};

// Q must be a product of the primal and dual sets. The gap uses the model's
// closed-form inner problems where present and a multi-start projected
// subgradient estimate otherwise.
SaddleRun saddle_solve(const SaddleModel& saddle, const ProxSetup& setup, const FeasibleSet& q,
                       const MPConfig& config, const GapEstimateOptions& gap_options = {});

// max_v f(u_hat, v) - min_u f(u, v_hat).
std::optional<double> saddle_gap(const SaddleModel& saddle, const FeasibleSet& q, const Vector& u_hat,
                                 const Vector& v_hat, const GapEstimateOptions& options, bool* estimated);

struct RestartConfig {
  double mu = 1.0;
  // d(x) <= Omega / 2 on the unit ball; 0 takes the setup's bound.
  double Omega = 0.0;
  double R0_sq = 1.0;
  double epsilon = 1e-3;
};

// Stage p runs mirror_prox_solve with d_p(x) = R_p^2 d((x - x_p) / R_p) until
// sum 1/L >= Omega / mu; stops once p > log2(R0^2 / eps).
MPRun restarted_mirror_prox(const VIModel& vi, const ProxSetup& setup, const FeasibleSet& q, const Point& x0,
                            const RestartConfig& rc, const MPConfig& mp);

// R_p^2 = R0^2 2^-p + 2 (1 - 2^-p) (delta + 2 delta~) / mu.
double restart_radius_sq(double R0_sq, int p, double delta, double delta_tilde, double mu);

}  // namespace inexact
