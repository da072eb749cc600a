#include "inexact/prox.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "inexact/errors.hpp"

namespace inexact {
namespace {

constexpr double kClamp = 1e-12;

const FeasibleSet::Simplex& require_simplex(const FeasibleSet& q, const std::string& who) {
  const auto* s = std::get_if<FeasibleSet::Simplex>(&q.kind());
  if (s == nullptr) fail(ErrorCode::kUnsupportedSet, who + " mirror step needs a simplex, got " + q.describe());
  return *s;
}

class EuclideanSetup final : public ProxSetup {
 public:
  std::string name() const override { return "euclidean"; }
  double d(const Point& x) const override { return 0.5 * x.squaredNorm(); }
  Vector grad_d(const Point& x) const override { return x; }
  double bregman(const Point& y, const Point& x) const override { return 0.5 * (x - y).squaredNorm(); }
  std::optional<double> omega_bound() const override { return 1.0; }
  std::optional<double> divergence_diameter(const FeasibleSet& q) const override {
    if (!q.bounded()) return std::nullopt;
    return 0.5 * q.diameter_sq();
  }
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    return q.project(shift / beta);
  }
};

class EntropySetup final : public ProxSetup {
 public:
  std::string name() const override { return "entropy"; }
  double d(const Point& x) const override {
    require(x.minCoeff() >= 0.0, ErrorCode::kDomainError, "entropy: negative coordinate");
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] > 0) total += x[i] * std::log(x[i]);
    return total;
  }
  Vector grad_d(const Point& x) const override {
    require(in_domain_interior(x), ErrorCode::kDomainError, "entropy: gradient undefined on the boundary");
    return (x.array().log() + 1.0).matrix();
  }
  double bregman(const Point& y, const Point& x) const override {
    require(in_domain_interior(y), ErrorCode::kDomainError, "entropy: divergence center on the boundary");
    require(x.minCoeff() >= 0.0, ErrorCode::kDomainError, "entropy: negative coordinate");
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      total += y[i] - x[i];
      if (x[i] > 0) total += x[i] * std::log(x[i] / y[i]);
    }
    return std::max(total, 0.0);
  }
  double norm(const Vector& v) const override { return v.lpNorm<1>(); }
  double dual_norm(const Vector& g) const override { return g.lpNorm<Eigen::Infinity>(); }
  bool in_domain_interior(const Point& y) const override { return y.allFinite() && y.minCoeff() > 0.0; }
  Point clamp_interior(const Point& x) const override { return x.cwiseMax(kClamp); }
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    const auto& s = require_simplex(q, "entropy");
    const Vector z = shift / beta;
    const Vector e = (z.array() - z.maxCoeff()).exp().matrix();
    return (s.scale / e.sum()) * e;
  }
};

class LogBarrierSetup final : public ProxSetup {
 public:
  std::string name() const override { return "log-barrier"; }
  double d(const Point& x) const override {
    require(in_domain_interior(x), ErrorCode::kDomainError, "log-barrier: point outside the open orthant");
    return -x.array().log().sum();
  }
  Vector grad_d(const Point& x) const override {
    require(in_domain_interior(x), ErrorCode::kDomainError, "log-barrier: point outside the open orthant");
    return (-x.array().inverse()).matrix();
  }
  double bregman(const Point& y, const Point& x) const override {
    require(in_domain_interior(y), ErrorCode::kDomainError, "log-barrier: divergence center on the boundary");
    require(x.minCoeff() >= 0.0, ErrorCode::kDomainError, "log-barrier: negative coordinate");
    if (x.minCoeff() == 0.0) return std::numeric_limits<double>::infinity();
    const Eigen::ArrayXd r = x.array() / y.array();
    return std::max((r - 1.0 - r.log()).sum(), 0.0);
  }
  bool in_domain_interior(const Point& y) const override { return y.allFinite() && y.minCoeff() > 0.0; }
  Point clamp_interior(const Point& x) const override { return x.cwiseMax(kClamp); }

  // KKT: x_i = 1 / (mu + g_i) with g_i = (max s - s_i) / beta >= 0 and mu > 0
  // chosen so that sum x = scale.
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    const auto& s = require_simplex(q, "log-barrier");
    const Eigen::ArrayXd g = (shift.maxCoeff() - shift.array()) / beta;
    auto mass = [&](double mu) { return (mu + g).inverse().sum(); };
    double lo = 0.0;
    double hi = 1.0 / s.scale;
    while (mass(hi) > s.scale) {
      lo = hi;
      hi *= 2.0;
    }
    double mu = hi;
    for (int it = 0; it < 400; ++it) {
      mu = 0.5 * (lo + hi);
      const double r = mass(mu) - s.scale;
      if (std::abs(r) <= 1e-12 * s.scale || hi - lo <= 1e-17 * hi) break;
      if (r > 0) lo = mu; else hi = mu;
    }
    const Eigen::ArrayXd x = (mu + g).inverse();
    return (x * (s.scale / x.sum())).matrix();
  }
};

class InverseGapSetup final : public ProxSetup {
 public:
  std::string name() const override { return "inverse-gap"; }
  double d(const Point& x) const override {
    require(in_domain_interior(x), ErrorCode::kDomainError, "inverse-gap: coordinate at or above 1");
    return (1.0 - x.array()).inverse().sum();
  }
  Vector grad_d(const Point& x) const override {
    require(in_domain_interior(x), ErrorCode::kDomainError, "inverse-gap: coordinate at or above 1");
    return (1.0 - x.array()).square().inverse().matrix();
  }
  double bregman(const Point& y, const Point& x) const override {
    require(in_domain_interior(y) && in_domain_interior(x), ErrorCode::kDomainError,
            "inverse-gap: coordinate at or above 1");
    const Eigen::ArrayXd a = 1.0 - x.array();
    const Eigen::ArrayXd b = 1.0 - y.array();
    return ((x - y).array().square() / (a * b.square())).sum();
  }
  bool in_domain_interior(const Point& y) const override { return y.allFinite() && y.maxCoeff() < 1.0; }
  Point clamp_interior(const Point& x) const override { return x.cwiseMin(1.0 - kClamp); }

  // KKT on {0 <= x <= cap, sum x = budget}:
  //   x_i(lambda) = clip(1 - sqrt(beta / (s_i - lambda)), 0, cap_i),
  // decreasing in lambda; lambda found by bisection.
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    const auto* cs = std::get_if<FeasibleSet::CappedSimplex>(&q.kind());
    if (cs == nullptr) fail(ErrorCode::kUnsupportedSet, "inverse-gap mirror step needs a capped simplex");
    require(cs->capacities.maxCoeff() < 1.0, ErrorCode::kUnsupportedSet, "inverse-gap needs capacities below 1");
    const Vector& cap = cs->capacities;
    auto point = [&](double lambda) {
      Vector x(shift.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double gap = shift[i] - lambda;
        x[i] = gap <= beta ? 0.0 : std::clamp(1.0 - std::sqrt(beta / gap), 0.0, cap[i]);
      }
      return x;
    };
    double hi = shift.maxCoeff() - beta;
    double lo = hi;
    for (Eigen::Index i = 0; i < cap.size(); ++i)
      lo = std::min(lo, shift[i] - beta / ((1.0 - cap[i]) * (1.0 - cap[i])));
    lo -= 1.0;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (point(mid).sum() > cs->budget) lo = mid; else hi = mid;
    }
    return point(0.5 * (lo + hi));
  }
};

class QuarticSetup final : public ProxSetup {
 public:
  std::string name() const override { return "quartic"; }
  double d(const Point& x) const override {
    const double a = x.squaredNorm();
    return 0.25 * a * a + 0.5 * a;
  }
  Vector grad_d(const Point& x) const override { return (x.squaredNorm() + 1.0) * x; }
  // 1/2 (1 + ||y||^2) ||x - y||^2 + 1/4 (||x||^2 - ||y||^2)^2
  double bregman(const Point& y, const Point& x) const override {
    const Vector diff = x - y;
    const double ab = diff.dot(x + y);
    return 0.5 * (1.0 + y.squaredNorm()) * diff.squaredNorm() + 0.25 * ab * ab;
  }
  std::optional<double> omega_bound() const override { return 1.5; }

  // Radial problem: x = t s / ||s||, beta (t^3 + t) = ||s||, t clipped to the radius.
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    double radius = std::numeric_limits<double>::infinity();
    if (const auto* b = std::get_if<FeasibleSet::Ball>(&q.kind())) {
      if (!b->center.isZero(0.0)) fail(ErrorCode::kUnsupportedSet, "quartic mirror step needs an origin-centered ball");
      radius = b->radius;
    } else if (!std::holds_alternative<FeasibleSet::Unconstrained>(q.kind())) {
      fail(ErrorCode::kUnsupportedSet, "quartic mirror step needs a ball or the whole space, got " + q.describe());
    }
    const double sn = shift.norm();
    if (sn == 0.0) return Vector::Zero(shift.size());
    const double c = sn / beta;
    double t = std::min(c, std::cbrt(c));
    for (int it = 0; it < 100; ++it) {
      const double next = t - (t * t * t + t - c) / (3.0 * t * t + 1.0);
      if (next >= t) break;
      t = next;
    }
    return (std::min(t, radius) / sn) * shift;
  }
};

class ScaledSetup final : public ProxSetup {
 public:
  ScaledSetup(SetupPtr base, Point center, double radius)
      : base_(std::move(base)), center_(std::move(center)), radius_(radius) {}

  std::string name() const override { return fmt::format("scaled({}, R={})", base_->name(), radius_); }
  double d(const Point& x) const override { return radius_ * radius_ * base_->d(inner(x)); }
  Vector grad_d(const Point& x) const override { return radius_ * base_->grad_d(inner(x)); }
  double bregman(const Point& y, const Point& x) const override {
    return radius_ * radius_ * base_->bregman(inner(y), inner(x));
  }
  double norm(const Vector& v) const override { return base_->norm(v); }
  double dual_norm(const Vector& g) const override { return base_->dual_norm(g); }
  bool strongly_convex_1() const override { return base_->strongly_convex_1(); }
  bool in_domain_interior(const Point& y) const override { return base_->in_domain_interior(inner(y)); }
  Point clamp_interior(const Point& x) const override { return outer(base_->clamp_interior(inner(x))); }
  std::optional<double> divergence_diameter(const FeasibleSet& q) const override {
    const auto img = q.affine_image(center_, radius_);
    if (!img) return std::nullopt;
    const auto base = base_->divergence_diameter(*img);
    if (!base) return std::nullopt;
    return radius_ * radius_ * *base;
  }
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    const auto img = q.affine_image(center_, radius_);
    if (!img) fail(ErrorCode::kUnsupportedSet, "rescaled prox needs a set closed under translation: " + q.describe());
    return outer(base_->mirror_step(*img, beta * radius_, shift));
  }

 private:
  Vector inner(const Point& x) const { return (x - center_) / radius_; }
  Vector outer(const Vector& z) const { return center_ + radius_ * z; }

  SetupPtr base_;
  Point center_;
  double radius_;
};

class ProductSetup final : public ProxSetup {
 public:
  explicit ProductSetup(std::vector<SetupBlock> blocks) : blocks_(std::move(blocks)) {}

  std::string name() const override {
    std::string out = "product(";
    for (std::size_t j = 0; j < blocks_.size(); ++j) out += (j ? ", " : "") + blocks_[j].setup->name();
    return out + ")";
  }
  double d(const Point& x) const override {
    double total = 0.0;
    for_blocks(x, [&](const ProxSetup& s, Eigen::Index off, Eigen::Index n) { total += s.d(x.segment(off, n)); });
    return total;
  }
  Vector grad_d(const Point& x) const override {
    Vector g(x.size());
    for_blocks(x, [&](const ProxSetup& s, Eigen::Index off, Eigen::Index n) {
      g.segment(off, n) = s.grad_d(x.segment(off, n));
    });
    return g;
  }
  double bregman(const Point& y, const Point& x) const override {
    double total = 0.0;
    for_blocks(x, [&](const ProxSetup& s, Eigen::Index off, Eigen::Index n) {
      total += s.bregman(y.segment(off, n), x.segment(off, n));
    });
    return total;
  }
  bool strongly_convex_1() const override {
    for (const auto& b : blocks_)
      if (!b.setup->strongly_convex_1()) return false;
    return true;
  }
  std::optional<double> omega_bound() const override {
    double total = 0.0;
    for (const auto& b : blocks_) {
      const auto o = b.setup->omega_bound();
      if (!o) return std::nullopt;
      total += *o;
    }
    return total;
  }
  bool in_domain_interior(const Point& y) const override {
    bool ok = true;
    for_blocks(y, [&](const ProxSetup& s, Eigen::Index off, Eigen::Index n) {
      ok = ok && s.in_domain_interior(y.segment(off, n));
    });
    return ok;
  }
  Point clamp_interior(const Point& x) const override {
    Vector out(x.size());
    for_blocks(x, [&](const ProxSetup& s, Eigen::Index off, Eigen::Index n) {
      out.segment(off, n) = s.clamp_interior(x.segment(off, n));
    });
    return out;
  }
  std::optional<double> divergence_diameter(const FeasibleSet& q) const override {
    const auto& p = blocks_of(q);
    double total = 0.0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const auto b = blocks_[j].setup->divergence_diameter(p.blocks[j]);
      if (!b) return std::nullopt;
      total += *b;
    }
    return total;
  }
  Point mirror_step(const FeasibleSet& q, double beta, const Vector& shift) const override {
    const auto& p = blocks_of(q);
    Vector x(shift.size());
    Eigen::Index off = 0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const auto n = blocks_[j].dim;
      x.segment(off, n) = blocks_[j].setup->mirror_step(p.blocks[j], beta, shift.segment(off, n));
      off += n;
    }
    return x;
  }

 private:
  const FeasibleSet::Product& blocks_of(const FeasibleSet& q) const {
    const auto* p = std::get_if<FeasibleSet::Product>(&q.kind());
    if (p == nullptr || p->blocks.size() != blocks_.size())
      fail(ErrorCode::kUnsupportedSet, "product setup needs a product set with matching blocks");
    for (std::size_t j = 0; j < blocks_.size(); ++j)
      require(p->blocks[j].dimension() == blocks_[j].dim, ErrorCode::kUnsupportedSet, "product setup: block size mismatch");
    return *p;
  }
  template <class F>
  void for_blocks(const Vector& x, F&& f) const {
    Eigen::Index off = 0;
    for (const auto& b : blocks_) off += b.dim;
    require(x.size() == off, ErrorCode::kInvalidArgument, "product setup: dimension mismatch");
    off = 0;
    for (const auto& b : blocks_) {
      f(*b.setup, off, b.dim);
      off += b.dim;
    }
  }

  std::vector<SetupBlock> blocks_;
};

}  // namespace

double ProxSetup::bregman(const Point& y, const Point& x) const {
  require(in_domain_interior(y), ErrorCode::kDomainError, name() + ": divergence center outside the domain interior");
  return d(x) - d(y) - grad_d(y).dot(x - y);
}

std::optional<double> ProxSetup::divergence_diameter(const FeasibleSet&) const { return std::nullopt; }

Point ProxSetup::prox_center(const FeasibleSet& q) const {
  return clamp_interior(mirror_step(q, 1.0, Vector::Zero(q.dimension())));
}

SetupPtr euclidean_setup() { return std::make_shared<EuclideanSetup>(); }
SetupPtr entropy_setup() { return std::make_shared<EntropySetup>(); }
SetupPtr log_barrier_setup() { return std::make_shared<LogBarrierSetup>(); }
SetupPtr inverse_gap_setup() { return std::make_shared<InverseGapSetup>(); }
SetupPtr quartic_setup() { return std::make_shared<QuarticSetup>(); }

SetupPtr scaled_setup(SetupPtr base, Point center, double radius) {
  require(base != nullptr && radius > 0, ErrorCode::kInvalidArgument, "scaled setup needs a base and radius > 0");
  return std::make_shared<ScaledSetup>(std::move(base), std::move(center), radius);
}

SetupPtr product_setup(std::vector<SetupBlock> blocks) {
  require(!blocks.empty(), ErrorCode::kInvalidArgument, "product setup needs blocks");
  for (const auto& b : blocks)
    require(b.setup != nullptr && b.dim > 0, ErrorCode::kInvalidArgument, "product setup: bad block");
  return std::make_shared<ProductSetup>(std::move(blocks));
}

double bregman(const ProxSetup& setup, const Point& y, const Point& x) {
  require(x.size() == y.size(), ErrorCode::kInvalidArgument, "bregman: dimension mismatch");
  return setup.bregman(y, x);
}

}  // namespace inexact
