#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "inexact/feasible_set.hpp"
#include "inexact/model.hpp"
#include "inexact/prox.hpp"
#include "inexact/validate.hpp"

namespace inexact {

struct Reference {
  std::optional<Point> x_star;
  std::optional<double> f_star;
  std::optional<double> divergence_bound;
};

using AnyModel = std::variant<ObjectiveModel, VIModel, SaddleModel>;

struct ProblemInstance {
  std::string name;
  AnyModel model;
  SetupPtr setup;
  FeasibleSet q = FeasibleSet::unconstrained(1);
  // Where validity checks draw points; a bounded part of Q when Q is unbounded.
  FeasibleSet sampling_region = FeasibleSet::unconstrained(1);
  Point start;
  Reference reference;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  // Declared constant for the sandwich or relative-smoothness check.
  std::optional<double> smoothness;
  std::optional<GroundTruth> truth;
  // Generated arrays by name, for serialization.
  std::map<std::string, Matrix> data;

  const ObjectiveModel* objective() const { return std::get_if<ObjectiveModel>(&model); }
  const VIModel* vi() const;
  const SaddleModel* saddle() const { return std::get_if<SaddleModel>(&model); }
};

// Constrained geometric problems, posed as the Lagrangian
// saddle problem over (unit ball) x (unit ball in the nonnegative orthant):
//   L(x, lambda) = f(x) + sum_p lambda_p phi_p(x),  phi_p(x) = sum_i a_pi |x_i| - 1.
enum class GeometricKind { kCoveringCircle, kFermatTorricelli, kBestApproximation };

struct GeometricData {
  Matrix points;  // N x n, rows are the points A_k
  Matrix alpha;   // m x n, nonnegative; m = 0 drops the constraints
  double radius = 1.0;
};

// `delta` is the slack at which the nonsmooth operator is relatively smooth;
// the declared constant is L(delta) = M^2 / (2 delta) + ||alpha||.
ProblemInstance make_geometric(GeometricKind kind, const GeometricData& data, double delta = 1e-2);
ProblemInstance make_covering_circle(int n, int m, int N, std::uint64_t seed, double delta = 1e-2);
ProblemInstance make_fermat_torricelli(int n, int m, int N, std::uint64_t seed, double delta = 1e-2);
ProblemInstance make_best_approximation(int n, int m, std::uint64_t seed, double delta = 1e-2);

struct QuarticData {
  Matrix A, C;
  Vector b, d;
  Matrix alpha;  // m x n; used by the constrained arm
};
// f(x) = 1/4 ||Ax - b||_4^4 + 1/2 ||Cx - d||^2, relatively smooth w.r.t.
// h(x) = 1/4 ||x||^4 + 1/2 ||x||^2.
ProblemInstance make_quartic(const QuarticData& data, bool constrained);
ProblemInstance make_quartic_relative(int n, std::uint64_t seed, bool constrained = false, int m = 10);
double quartic_smoothness(const Matrix& A, const Vector& b, const Matrix& C);

// f(x) = -ln det(H diag(x) H^T) on the unit simplex, 1-smooth relative to -sum ln x.
ProblemInstance make_d_optimal_from(const Matrix& H, std::uint64_t seed = 0);
ProblemInstance make_d_optimal(int m, int n, std::uint64_t seed);

// Latency operator g_i(x) = 1 / (alpha_i - x_i), alpha_i = sqrt(3)/2, on
// {0 <= x_i < alpha_i, sum x = n/2}; prox d(x) = sum 1 / (1 - x_i).
ProblemInstance make_resource_sharing(int n);

// f(x) = 1/2 ||Ax - b||^2 + m_reg sum x_k ln x_k on the unit simplex.
ProblemInstance make_traffic_from(const Matrix& A, const Vector& b, double m_reg);
ProblemInstance make_traffic_composite(int n, std::uint64_t seed, double m_reg = 0.1);

// Replaces the reference and re-runs the first-order check.
ProblemInstance attach_reference(ProblemInstance instance, Reference reference);

// Named construction for the command line and bench specs. Unknown names
// raise UnknownProblem.
ProblemInstance make_problem(const std::string& name, const std::map<std::string, double>& params,
                             std::uint64_t seed);
std::vector<std::string> problem_names();

ValidationReport validate_instance(const ProblemInstance& instance, const ValidationOptions& options = {});

}  // namespace inexact
