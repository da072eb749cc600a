#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inexact/feasible_set.hpp"
#include "inexact/types.hpp"

namespace inexact {

// Distance-generating function d with its Bregman divergence
//   V[y](x) = d(x) - d(y) - <grad d(y), x - y>
// and the closed-form mirror step used by every prox subproblem.
class ProxSetup {
 public:
  virtual ~ProxSetup() = default;

  virtual std::string name() const = 0;
  virtual double d(const Point& x) const = 0;
  // Throws DomainError outside the interior of dom d.
  virtual Vector grad_d(const Point& x) const = 0;
  // V[y](x); throws DomainError when y is outside the interior of dom d.
  virtual double bregman(const Point& y, const Point& x) const;

  virtual double norm(const Vector& v) const { return v.norm(); }
  virtual double dual_norm(const Vector& g) const { return g.norm(); }
  virtual bool strongly_convex_1() const { return true; }
  // Omega with d(x) <= Omega / 2 on the unit ball of the norm.
  virtual std::optional<double> omega_bound() const { return std::nullopt; }
  virtual bool in_domain_interior(const Point& y) const { return y.allFinite(); }
  // Moves a point 1e-12 away from the singular boundary of dom d.
  virtual Point clamp_interior(const Point& x) const { return x; }
  // max over x, y in Q of V[y](x), when a closed-form bound is known.
  virtual std::optional<double> divergence_diameter(const FeasibleSet& q) const;

  // argmin over Q of  beta * d(x) - <shift, x>,  beta > 0.
  // Throws UnsupportedSet when Q has no closed form for this setup.
  virtual Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const = 0;

  // argmin over Q of d.
  Point prox_center(const FeasibleSet& q) const;
};

using SetupPtr = std::shared_ptr<const ProxSetup>;

// d(x) = 1/2 ||x||^2; any set kind. Omega = 1.
SetupPtr euclidean_setup();
// d(x) = sum x_i ln x_i on simplices; l1 norm.
SetupPtr entropy_setup();
// d(x) = -sum ln x_i on simplices.
SetupPtr log_barrier_setup();
// d(x) = sum 1 / (1 - x_i) on capped simplices with capacities below 1.
SetupPtr inverse_gap_setup();
// d(x) = 1/4 ||x||^4 + 1/2 ||x||^2 on origin-centered balls and the whole space.
SetupPtr quartic_setup();
// d_p(x) = R^2 d((x - center) / R) on sets closed under translation and scaling.
SetupPtr scaled_setup(SetupPtr base, Point center, double radius);
struct SetupBlock {
  SetupPtr setup;
  Eigen::Index dim;
};
// d(x) = sum_j d_j(x_j) over consecutive coordinate blocks.
SetupPtr product_setup(std::vector<SetupBlock> blocks);

double bregman(const ProxSetup& setup, const Point& y, const Point& x);

}  // namespace inexact
