#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace inexact {

enum class ArmKind { kAdaptiveIncreasing, kAdaptiveNonincreasing, kFixedL };

struct Arm {
  ArmKind kind = ArmKind::kAdaptiveIncreasing;
  std::optional<double> L;  // fixed-L only
  double zeta = 2.0;        // gm only

  // "adaptive-increasing", "adaptive-nonincreasing", "fixed-L(0.5)";
  // a non-default zeta appends "(zeta=1.1)".
  std::string label() const;
};

enum class TolerancePolicy { kExact, kFactor2 };

struct AcceptanceRow {
  std::string arm;
  double epsilon = 0.0;
  int iterations = 0;
  TolerancePolicy policy = TolerancePolicy::kFactor2;
};

struct SolverSettings {
  double L0 = 1.0;
  // delta = delta_per_eps * eps + delta_fixed.
  double delta_per_eps = 0.0;
  double delta_fixed = 0.0;
  double delta_tilde = 0.0;
  // Length of the run that supplies f_ref when the instance has no f*.
  int reference_iterations = 20000;
  int gap_samples = 1000;
  bool validate = true;
};

struct BenchSpec {
  std::string name;
  std::string problem;
  std::map<std::string, double> problem_params;
  std::uint64_t seed = 42;
  // "mirror_prox", "saddle_mirror_prox" or "gm".
  std::string solver;
  SolverSettings settings;
  std::vector<double> epsilon_grid;
  std::vector<Arm> arms;
  std::string output_dir;
  bool timing = true;
  // Per-arm cap; hitting it marks the row censored.
  int iteration_cap = 100000;
  bool write_traces = false;
  std::vector<AcceptanceRow> acceptance;
};

// InvalidArgument on an empty or non-decreasing epsilon grid, no arms, or
// malformed entries.
void validate_spec(const BenchSpec& spec);
BenchSpec parse_bench_spec(const nlohmann::json& j);
BenchSpec load_bench_spec(const std::filesystem::path& file);
nlohmann::json spec_to_json(const BenchSpec& spec);

struct BenchRow {
  double epsilon = 0.0;
  std::string arm;
  int iterations = 0;
  long model_evals = 0;
  long wallclock_ns = 0;
  double bound_rhs = 0.0;
  bool bound_satisfied = false;
  bool censored = false;
  // (k, error measure) per iteration: f - f_ref for objectives, the running
  // gap bound for Mirror-Prox.
  std::vector<std::pair<double, double>> convergence;
};

struct AcceptanceOutcome {
  AcceptanceRow row;
  std::optional<int> observed;
  bool passed = false;
};

struct BenchReport {
  std::string name;
  std::string problem;
  std::string solver;
  std::vector<BenchRow> rows;
  std::vector<AcceptanceOutcome> acceptance;
  std::optional<bool> validation_passed;
  std::optional<double> f_ref;

  bool passed() const;
  std::string csv() const;
  nlohmann::json summary() const;
};

// Solves every (arm, epsilon) cell; writes <name>.csv, <name>.summary.json
// and optional traces under output_dir when it is set.
BenchReport run_bench(const BenchSpec& spec);
void write_bench_outputs(const BenchReport& report, const std::filesystem::path& dir);

enum class PlotKind { kConvergence, kIterationsVsEps, kTimeVsEps };
PlotKind parse_plot_kind(const std::string& s);

// One two-column file per arm plus a .meta.json sidecar carrying axis labels
// and log-scale hints. Convergence series use the smallest epsilon.
std::vector<std::filesystem::path> emit_plot_data(const BenchReport& report, PlotKind kind,
                                                  const std::filesystem::path& dir);

}  // namespace inexact
