#pragma once

#include <string>
#include <vector>

#include "inexact/types.hpp"

namespace inexact {

struct StageRecord {
  int stage = 0;
  int iterations = 0;
  double max_L = 0.0;
  double R_sq = 0.0;
  // Guaranteed contraction factor of the stage, 4 max_L / (mu N^2).
  double contraction = 0.0;
};

// Trace of one GM/FGM solve. Per-iteration vectors are indexed by k = 1..N
// at position k - 1.
struct SolverRun {
  std::string method;
  std::string mode;

  std::vector<Point> iterates;
  Point start;
  Point last_point;
  Point best_point;
  double best_value = 0.0;

  std::vector<double> f_history;
  std::vector<double> L_history;
  std::vector<long> evals_history;
  std::vector<double> bound_history;
  std::vector<double> V_to_ref;

  // Sum of 1 / (L_k + m) over accepted steps.
  double S = 0.0;
  long linesearch_evals = 0;
  double delta = 0.0;
  double delta_tilde = 0.0;
  double mu = 0.0;
  double m = 0.0;
  bool converged = true;

  // Accelerated runs.
  std::vector<double> A_history;
  std::vector<double> alpha_history;
  std::vector<double> delta_history;
  std::vector<double> delta_tilde_history;
  std::vector<int> stage_history;
  std::vector<StageRecord> stages;
  Point last_u;

  int iterations() const { return static_cast<int>(L_history.size()); }
};

}  // namespace inexact
