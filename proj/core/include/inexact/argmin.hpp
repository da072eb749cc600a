#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "inexact/feasible_set.hpp"
#include "inexact/prox.hpp"
#include "inexact/types.hpp"

namespace inexact {

struct ConvexTerm {
  std::function<double(const Point&)> value;
  std::function<Vector(const Point&)> subgradient;
};

// The map x -> psi(x, y) for a fixed y, up to an additive constant:
//   <linear, x> + d_weight * d_setup(x) + remainder(x).
// The d-term is folded into the prox weight when d_setup matches the
// solver's setup; otherwise it joins the remainder.
struct ModelSlice {
  Vector linear;
  double d_weight = 0.0;
  SetupPtr d_setup;
  std::optional<ConvexTerm> remainder;
};

struct ProxTerm {
  double weight;
  Point anchor;
};

// minimize  scale * slice(x) + sum_j weight_j * V[anchor_j](x)  over Q.
struct Subproblem {
  ModelSlice slice;
  double scale = 1.0;
  std::vector<ProxTerm> prox;

  double value(const ProxSetup& setup, const Point& x) const;
};

struct ArgminOptions {
  double target_delta_tilde = 0.0;
  int max_inner_iterations = 20000;
};

struct ArgminCertificate {
  Point solution;
  double delta_tilde = 0.0;
  int inner_iterations = 0;
};

// Closed-form mirror steps report delta_tilde = 0. Subproblems with a
// remainder term are solved by Bregman proximal-gradient iterations and
// certified through max over Q of <-h, x - solution> with h a subgradient.
ArgminCertificate composite_argmin(const ProxSetup& setup, const FeasibleSet& q, const Subproblem& problem,
                                   const ArgminOptions& options = {});

// minimize part(x) + beta * V[anchor](x) over Q.
ArgminCertificate composite_argmin(const ProxSetup& setup, const FeasibleSet& q, const ModelSlice& part, double beta,
                                   const Point& anchor, double target_delta_tilde);

// max over x in Q of <-h, x - x_tilde>; zero iff x_tilde minimizes <h, .> on Q.
double certify_inexactness(const FeasibleSet& q, const Vector& h, const Point& x_tilde);

}  // namespace inexact
