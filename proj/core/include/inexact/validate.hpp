#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "inexact/model.hpp"

namespace inexact {

struct CheckResult {
  std::string name;
  double max_violation = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool passed = true;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
  nlohmann::json to_json() const;
};

enum class PairSampling {
  kIndependent,
  kDiagonal,  // every pair and triple collapses to x = y = z
};

struct ValidationOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double tolerance = 1e-8;
  std::optional<double> L_candidate;
  PairSampling pairs = PairSampling::kIndependent;
};

struct GroundTruth {
  std::function<double(const Point&)> f;
};

// Points are drawn from `region` (usually Q, or a bounded part of it).
// Sandwich checks need ground truth; requesting the upper one through
// L_candidate without it raises GroundTruthRequired.
ValidationReport validate_model(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& options, const std::optional<GroundTruth>& truth = {});
ValidationReport validate_model(const VIModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& options);
ValidationReport validate_model(const SaddleModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& options);

// Divergence nonnegativity, V[x](x) = 0, the (1-SC) and Omega claims, and the
// three-point identity.
ValidationReport validate_setup(const ProxSetup& setup, const FeasibleSet& region, const ValidationOptions& options);

}  // namespace inexact
