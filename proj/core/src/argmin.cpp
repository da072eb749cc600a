#include "inexact/argmin.hpp"

#include <cmath>
#include <limits>

#include "inexact/errors.hpp"

namespace inexact {
namespace {

bool same_setup(const ProxSetup& a, const SetupPtr& b) { return b && (&a == b.get() || a.name() == b->name()); }

struct Reduced {
  double beta = 0.0;
  Vector shift;
  std::optional<ConvexTerm> remainder;
};

// Collapses the subproblem to  beta d(x) - <shift, x> + remainder(x).
Reduced reduce(const ProxSetup& setup, const FeasibleSet& q, const Subproblem& p) {
  const auto n = q.dimension();
  Reduced r;
  r.shift = Vector::Zero(n);
  if (p.slice.linear.size() > 0) {
    require(p.slice.linear.size() == n, ErrorCode::kInvalidArgument, "argmin: linear term dimension mismatch");
    r.shift -= p.scale * p.slice.linear;
  }
  for (const auto& t : p.prox) {
    require(t.weight >= 0, ErrorCode::kInvalidArgument, "argmin: negative prox weight");
    if (t.weight == 0) continue;
    const Point a = setup.clamp_interior(t.anchor);
    r.beta += t.weight;
    r.shift += t.weight * setup.grad_d(a);
  }
  std::vector<ConvexTerm> extra;
  if (p.slice.d_weight != 0.0) {
    require(p.slice.d_weight > 0 && p.slice.d_setup, ErrorCode::kInvalidArgument, "argmin: bad d-term");
    if (same_setup(setup, p.slice.d_setup)) {
      r.beta += p.scale * p.slice.d_weight;
    } else {
      const double w = p.scale * p.slice.d_weight;
      const SetupPtr ds = p.slice.d_setup;
      extra.push_back({[ds, w](const Point& x) { return w * ds->d(x); },
                       [ds, w](const Point& x) -> Vector { return w * ds->grad_d(ds->clamp_interior(x)); }});
    }
  }
  if (p.slice.remainder) {
    const double w = p.scale;
    const ConvexTerm rem = *p.slice.remainder;
    extra.push_back({[rem, w](const Point& x) { return w * rem.value(x); },
                     [rem, w](const Point& x) -> Vector { return w * rem.subgradient(x); }});
  }
  if (extra.size() == 1) {
    r.remainder = extra.front();
  } else if (extra.size() == 2) {
    r.remainder = ConvexTerm{
        [extra](const Point& x) { return extra[0].value(x) + extra[1].value(x); },
        [extra](const Point& x) -> Vector { return extra[0].subgradient(x) + extra[1].subgradient(x); }};
  }
  return r;
}

}  // namespace

double Subproblem::value(const ProxSetup& setup, const Point& x) const {
  double v = 0.0;
  if (slice.linear.size() > 0) v += scale * slice.linear.dot(x);
  if (slice.d_weight != 0.0) v += scale * slice.d_weight * slice.d_setup->d(x);
  if (slice.remainder) v += scale * slice.remainder->value(x);
  for (const auto& t : prox)
    if (t.weight != 0) v += t.weight * setup.bregman(setup.clamp_interior(t.anchor), x);
  return v;
}

double certify_inexactness(const FeasibleSet& q, const Vector& h, const Point& x_tilde) {
  return std::max(0.0, q.support(-h) + h.dot(x_tilde));
}

ArgminCertificate composite_argmin(const ProxSetup& setup, const FeasibleSet& q, const Subproblem& problem,
                                   const ArgminOptions& options) {
  require(options.target_delta_tilde >= 0, ErrorCode::kInvalidArgument, "argmin: negative target");
  const Reduced r = reduce(setup, q, problem);

  if (!r.remainder) {
    if (r.beta > 0) return {setup.clamp_interior(setup.mirror_step(q, r.beta, r.shift)), 0.0, 0};
    if (r.shift.isZero(0.0)) return {setup.prox_center(q), 0.0, 0};
    if (!q.bounded()) fail(ErrorCode::kUnboundedSubproblem, "linear objective on an unbounded set");
    return {q.lmo(-r.shift), 0.0, 0};
  }
  if (r.beta == 0 && !q.bounded()) fail(ErrorCode::kUnboundedSubproblem, "no prox term on an unbounded set");

  // Bregman proximal gradient on the remainder with backtracking on tau.
  const ConvexTerm& rem = *r.remainder;
  Point x = r.beta > 0 ? setup.clamp_interior(setup.mirror_step(q, r.beta, r.shift)) : setup.prox_center(q);
  double tau = 1.0;
  for (int it = 1; it <= options.max_inner_iterations; ++it) {
    const Vector g = rem.subgradient(x);
    const double fx = rem.value(x);
    const Vector gd = setup.grad_d(x);
    Point next;
    for (int bt = 0;; ++bt) {
      next = setup.clamp_interior(setup.mirror_step(q, r.beta + tau, r.shift + tau * gd - g));
      const double model = fx + g.dot(next - x) + tau * setup.bregman(x, next);
      if (rem.value(next) <= model + 1e-15 * (std::abs(fx) + 1.0)) break;
      tau *= 2.0;
      if (bt > 200) fail(ErrorCode::kMaxInnerIterations, "argmin: backtracking on the remainder diverged");
    }
    tau = std::max(tau * 0.5, 1e-12);
    x = next;
    const Vector h = r.beta * setup.grad_d(x) - r.shift + rem.subgradient(x);
    const double cert = certify_inexactness(q, h, x);
    if (cert <= options.target_delta_tilde) return {x, cert, it};
  }
  fail(ErrorCode::kMaxInnerIterations, "argmin: could not certify the requested inexactness");
}

ArgminCertificate composite_argmin(const ProxSetup& setup, const FeasibleSet& q, const ModelSlice& part, double beta,
                                   const Point& anchor, double target_delta_tilde) {
  Subproblem p;
  p.slice = part;
  p.prox.push_back({beta, anchor});
  return composite_argmin(setup, q, p, {target_delta_tilde, ArgminOptions{}.max_inner_iterations});
}

}  // namespace inexact
