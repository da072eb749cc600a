#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "inexact/argmin.hpp"
#include "inexact/prox.hpp"
#include "inexact/types.hpp"

namespace inexact {

enum class ModelVariant {
  kBregman,  // upper bound L V[y](x) + delta
  kNorm,     // upper bound L/2 ||x - y||^2 + delta
};

// Inexact model of an objective:
//   mu V[y](x) <= f(x) - f_delta(y) - psi(x, y) <= L V[y](x) + delta,
// psi(., y) convex and relatively m-strongly convex, psi(x, x) = 0.
struct ObjectiveModel {
  std::function<double(const Point&)> f_delta;
  std::function<double(const Point& x, const Point& y)> psi;
  std::function<Vector(const Point& x, const Point& y)> psi_subgradient;
  std::function<ModelSlice(const Point& y)> slice;
  double delta = 0.0;
  double mu = 0.0;
  double m = 0.0;
  ModelVariant variant = ModelVariant::kBregman;
  std::optional<double> smoothness;
};

// Inexact model of a variational inequality: psi(x, x) = 0, psi(., y)
// convex, psi(x, y) + psi(y, x) + mu ||x - y||^2 <= delta.
struct VIModel {
  std::function<double(const Point& x, const Point& y)> psi;
  std::function<Vector(const Point& x, const Point& y)> psi_subgradient;
  std::function<ModelSlice(const Point& y)> slice;
  double delta = 0.0;
  double mu = 0.0;
  std::optional<double> smoothness;
  // Exact psi, when psi above is an approximation of it.
  std::function<double(const Point& x, const Point& y)> psi_true;
  // The operator g, when psi(x, y) = <g(y), x - y> (+ composite terms).
  std::function<Vector(const Point&)> op;
};

// Closed-form inner problems of a saddle objective, used for the duality gap.
struct GapOracle {
  std::function<double(const Vector& u)> max_over_v;
  std::function<double(const Vector& v)> min_over_u;
};

struct SaddleModel {
  VIModel vi;
  std::function<double(const Vector& u, const Vector& v)> f;
  Eigen::Index n_primal = 0;
  Eigen::Index n_dual = 0;
  // Subgradient in u and supergradient in v of f, for sampled gap estimates.
  std::function<Vector(const Vector& u, const Vector& v)> grad_u;
  std::function<Vector(const Vector& u, const Vector& v)> grad_v;
  GapOracle gap;
};

struct DistanceTerm {
  double weight;
  SetupPtr setup;
};
// h(x) as an arbitrary convex term or as a multiple of a prox function.
using CompositeTerm = std::variant<ConvexTerm, DistanceTerm>;

ObjectiveModel model_from_gradient(std::function<double(const Point&)> f, std::function<Vector(const Point&)> grad_f,
                                   ModelVariant variant = ModelVariant::kBregman);

// psi(x, y) = <grad g(y), x - y> + h(x) - h(y); f_delta = g + h.
ObjectiveModel model_composite(std::function<double(const Point&)> g, std::function<Vector(const Point&)> grad_g,
                               CompositeTerm h, double m_h, ModelVariant variant = ModelVariant::kBregman);

// psi(x, y) = <g(y), x - y>.
VIModel vi_model_from_operator(std::function<Vector(const Point&)> g, double delta = 0.0, double mu = 0.0);

// x = (u, v). psi(x, y) = <g~(y), x - y> + h(u_x) + phi(v_x) - h(u_y) - phi(v_y)
// with g~ = (grad_u f~, -grad_v f~); f = f~(u, v) + h(u) - phi(v).
SaddleModel saddle_model_composite(std::function<double(const Vector& u, const Vector& v)> f_tilde,
                                   std::function<Vector(const Point&)> grad_tilde, std::optional<ConvexTerm> h,
                                   std::optional<ConvexTerm> phi, Eigen::Index n_primal, Eigen::Index n_dual);

ObjectiveModel with_variant(ObjectiveModel model, ModelVariant variant);

}  // namespace inexact
