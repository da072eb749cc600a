#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inexact/rng.hpp"
#include "inexact/types.hpp"

namespace inexact {

// Closed-form convex sets. Membership is exact for inequality constraints and
// uses an absolute tolerance for equality constraints and ball radii.
class FeasibleSet {
 public:
  struct Ball {
    Vector center;
    double radius;
  };
  // {x >= 0, ||x||_2 <= radius}
  struct NonnegativeBall {
    Eigen::Index dim;
    double radius;
  };
  // {x >= 0, sum x = scale}
  struct Simplex {
    Eigen::Index dim;
    double scale;
  };
  // {0 <= x_i < capacity_i, sum x = budget}
  struct CappedSimplex {
    Vector capacities;
    double budget;
  };
  struct Unconstrained {
    Eigen::Index dim;
  };
  struct Product {
    std::vector<FeasibleSet> blocks;
  };
  using Kind = std::variant<Ball, NonnegativeBall, Simplex, CappedSimplex, Unconstrained, Product>;

  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet unit_ball(Eigen::Index dim);
  static FeasibleSet nonnegative_ball(Eigen::Index dim, double radius = 1.0);
  static FeasibleSet simplex(Eigen::Index dim, double scale = 1.0);
  static FeasibleSet capped_simplex(Vector capacities, double budget);
  static FeasibleSet unconstrained(Eigen::Index dim);
  static FeasibleSet product(std::vector<FeasibleSet> blocks);

  const Kind& kind() const { return kind_; }
  Eigen::Index dimension() const;
  std::string describe() const;
  bool bounded() const;

  bool contains(const Vector& x, double tol = 1e-10) const;
  // sup over the set of <g, x>; +inf when unbounded in direction g.
  double support(const Vector& g) const;
  // argmin over the closure of <g, x>. Ties go to the lowest index on
  // simplices and to the center on balls.
  Point lmo(const Vector& g) const;
  Point project(const Vector& x) const;
  // Uniform on balls, Dirichlet(1,...,1) on simplices, interior points of
  // capped simplices, standard normal for the unconstrained kind.
  Point sample(Rng& rng) const;
  // Upper bound on max ||x - y||_2^2 over the set.
  double diameter_sq() const;

  // Block start offsets for product sets (size blocks + 1); {0, dim} otherwise.
  std::vector<Eigen::Index> offsets() const;
  // {(x - shift) / scale : x in the set} for kinds closed under translation
  // and scaling; nullopt otherwise.
  std::optional<FeasibleSet> affine_image(const Vector& shift, double scale) const;

 private:
  explicit FeasibleSet(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

Point linear_minimization_oracle(const FeasibleSet& q, const Vector& g);

}  // namespace inexact
