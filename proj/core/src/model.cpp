#include "inexact/model.hpp"

#include <utility>

#include "inexact/errors.hpp"

namespace inexact {

ObjectiveModel model_from_gradient(std::function<double(const Point&)> f, std::function<Vector(const Point&)> grad_f,
                                   ModelVariant variant) {
  ObjectiveModel model;
  model.f_delta = f;
  model.psi = [grad_f](const Point& x, const Point& y) { return grad_f(y).dot(x - y); };
  model.psi_subgradient = [grad_f](const Point&, const Point& y) { return grad_f(y); };
  model.slice = [grad_f](const Point& y) {
    ModelSlice s;
    s.linear = grad_f(y);
    return s;
  };
  model.variant = variant;
  return model;
}

ObjectiveModel model_composite(std::function<double(const Point&)> g, std::function<Vector(const Point&)> grad_g,
                               CompositeTerm h, double m_h, ModelVariant variant) {
  require(m_h >= 0, ErrorCode::kInvalidArgument, "model_composite: m_h must be nonnegative");
  std::function<double(const Point&)> h_value;
  std::function<Vector(const Point&)> h_sub;
  ModelSlice base;
  if (const auto* dt = std::get_if<DistanceTerm>(&h)) {
    require(dt->setup != nullptr && dt->weight >= 0, ErrorCode::kInvalidArgument, "model_composite: bad distance term");
    const double w = dt->weight;
    const SetupPtr s = dt->setup;
    h_value = [w, s](const Point& x) { return w * s->d(x); };
    h_sub = [w, s](const Point& x) -> Vector { return w * s->grad_d(s->clamp_interior(x)); };
    base.d_weight = w;
    base.d_setup = s;
  } else {
    const auto& ct = std::get<ConvexTerm>(h);
    h_value = ct.value;
    h_sub = ct.subgradient;
    base.remainder = ct;
  }

  ObjectiveModel model;
  model.f_delta = [g, h_value](const Point& x) { return g(x) + h_value(x); };
  model.psi = [grad_g, h_value](const Point& x, const Point& y) {
    return grad_g(y).dot(x - y) + h_value(x) - h_value(y);
  };
  model.psi_subgradient = [grad_g, h_sub](const Point& x, const Point& y) -> Vector { return grad_g(y) + h_sub(x); };
  model.slice = [grad_g, base](const Point& y) {
    ModelSlice s = base;
    s.linear = grad_g(y);
    return s;
  };
  model.m = m_h;
  model.variant = variant;
  return model;
}

VIModel vi_model_from_operator(std::function<Vector(const Point&)> g, double delta, double mu) {
  require(delta >= 0 && mu >= 0, ErrorCode::kInvalidArgument, "vi model: delta and mu must be nonnegative");
  VIModel vi;
  vi.psi = [g](const Point& x, const Point& y) { return g(y).dot(x - y); };
  vi.psi_subgradient = [g](const Point&, const Point& y) { return g(y); };
  vi.slice = [g](const Point& y) {
    ModelSlice s;
    s.linear = g(y);
    return s;
  };
  vi.delta = delta;
  vi.mu = mu;
  vi.op = std::move(g);
  return vi;
}

SaddleModel saddle_model_composite(std::function<double(const Vector& u, const Vector& v)> f_tilde,
                                   std::function<Vector(const Point&)> grad_tilde, std::optional<ConvexTerm> h,
                                   std::optional<ConvexTerm> phi, Eigen::Index n_primal, Eigen::Index n_dual) {
  require(n_primal > 0 && n_dual > 0, ErrorCode::kInvalidArgument, "saddle model: both blocks must be nonempty");
  const Eigen::Index n1 = n_primal;
  const Eigen::Index n2 = n_dual;
  auto extra = [h, phi, n1, n2](const Point& x) {
    double v = 0.0;
    if (h) v += h->value(x.head(n1));
    if (phi) v += phi->value(x.tail(n2));
    return v;
  };
  auto extra_sub = [h, phi, n1, n2](const Point& x) {
    Vector g = Vector::Zero(n1 + n2);
    if (h) g.head(n1) = h->subgradient(x.head(n1));
    if (phi) g.tail(n2) = phi->subgradient(x.tail(n2));
    return g;
  };

  SaddleModel s;
  s.n_primal = n1;
  s.n_dual = n2;
  s.vi.op = grad_tilde;
  s.vi.psi = [grad_tilde, extra](const Point& x, const Point& y) {
    return grad_tilde(y).dot(x - y) + extra(x) - extra(y);
  };
  s.vi.psi_subgradient = [grad_tilde, extra_sub](const Point& x, const Point& y) -> Vector {
    return grad_tilde(y) + extra_sub(x);
  };
  const bool composite = h.has_value() || phi.has_value();
  s.vi.slice = [grad_tilde, extra, extra_sub, composite](const Point& y) {
    ModelSlice sl;
    sl.linear = grad_tilde(y);
    if (composite) sl.remainder = ConvexTerm{extra, extra_sub};
    return sl;
  };
  s.f = [f_tilde, h, phi](const Vector& u, const Vector& v) {
    double val = f_tilde(u, v);
    if (h) val += h->value(u);
    if (phi) val -= phi->value(v);
    return val;
  };
  s.grad_u = [grad_tilde, h, n1, n2](const Vector& u, const Vector& v) -> Vector {
    Vector x(n1 + n2);
    x << u, v;
    Vector g = grad_tilde(x).head(n1);
    if (h) g += h->subgradient(u);
    return g;
  };
  s.grad_v = [grad_tilde, phi, n1, n2](const Vector& u, const Vector& v) -> Vector {
    Vector x(n1 + n2);
    x << u, v;
    Vector g = -grad_tilde(x).tail(n2);
    if (phi) g -= phi->subgradient(v);
    return g;
  };
  return s;
}

ObjectiveModel with_variant(ObjectiveModel model, ModelVariant variant) {
  model.variant = variant;
  return model;
}

}  // namespace inexact
