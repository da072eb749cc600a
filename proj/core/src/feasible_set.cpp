#include "inexact/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "inexact/errors.hpp"

namespace inexact {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Eigen::Index> sorted_indices(const Vector& g, bool descending) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(g.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return descending ? g[a] > g[b] : g[a] < g[b];
  });
  return idx;
}

// Fills coordinates in the given order up to their capacity until the budget
// is used; the extreme points of a capped simplex.
Vector greedy_fill(const Vector& caps, double budget, const std::vector<Eigen::Index>& order) {
  Vector x = Vector::Zero(caps.size());
  double left = budget;
  for (Eigen::Index i : order) {
    if (left <= 0) break;
    x[i] = std::min(caps[i], left);
    left -= x[i];
  }
  return x;
}

Vector project_simplex(const Vector& v, double scale) {
  Vector u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - scale) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Vector project_capped(const Vector& v, const Vector& caps, double budget) {
  auto mass = [&](double tau) { return (v - Vector::Constant(v.size(), tau)).cwiseMax(0.0).cwiseMin(caps).sum(); };
  double lo = (v - caps).minCoeff() - 1.0;
  double hi = v.maxCoeff() + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > budget) lo = mid; else hi = mid;
  }
  return (v - Vector::Constant(v.size(), 0.5 * (lo + hi))).cwiseMax(0.0).cwiseMin(caps);
}

}  // namespace

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require(radius > 0 && std::isfinite(radius), ErrorCode::kInvalidArgument, "ball radius must be positive");
  require(center.size() > 0, ErrorCode::kInvalidArgument, "ball dimension must be positive");
  return FeasibleSet(Ball{std::move(center), radius});
}

FeasibleSet FeasibleSet::unit_ball(Eigen::Index dim) { return ball(Vector::Zero(dim), 1.0); }

FeasibleSet FeasibleSet::nonnegative_ball(Eigen::Index dim, double radius) {
  require(dim > 0 && radius > 0, ErrorCode::kInvalidArgument, "nonnegative ball needs dim > 0, radius > 0");
  return FeasibleSet(NonnegativeBall{dim, radius});
}

FeasibleSet FeasibleSet::simplex(Eigen::Index dim, double scale) {
  require(dim > 0 && scale > 0, ErrorCode::kInvalidArgument, "simplex needs dim > 0, scale > 0");
  return FeasibleSet(Simplex{dim, scale});
}

FeasibleSet FeasibleSet::capped_simplex(Vector capacities, double budget) {
  require(capacities.size() > 0 && (capacities.array() > 0).all(), ErrorCode::kInvalidArgument,
          "capped simplex capacities must be positive");
  require(budget >= 0 && budget < capacities.sum(), ErrorCode::kInvalidArgument,
          "capped simplex budget must lie in [0, sum of capacities)");
  return FeasibleSet(CappedSimplex{std::move(capacities), budget});
}

FeasibleSet FeasibleSet::unconstrained(Eigen::Index dim) {
  require(dim > 0, ErrorCode::kInvalidArgument, "dimension must be positive");
  return FeasibleSet(Unconstrained{dim});
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> blocks) {
  require(!blocks.empty(), ErrorCode::kInvalidArgument, "product needs at least one block");
  return FeasibleSet(Product{std::move(blocks)});
}

Eigen::Index FeasibleSet::dimension() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return b.center.size(); },
                        [](const NonnegativeBall& b) { return b.dim; },
                        [](const Simplex& s) { return s.dim; },
                        [](const CappedSimplex& s) { return s.capacities.size(); },
                        [](const Unconstrained& u) { return u.dim; },
                        [](const Product& p) {
                          Eigen::Index n = 0;
                          for (const auto& b : p.blocks) n += b.dimension();
                          return n;
                        },
                    },
                    kind_);
}

std::string FeasibleSet::describe() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return fmt::format("ball(dim={}, r={})", b.center.size(), b.radius); },
                        [](const NonnegativeBall& b) { return fmt::format("nonnegative-ball(dim={}, r={})", b.dim, b.radius); },
                        [](const Simplex& s) { return fmt::format("simplex(dim={}, scale={})", s.dim, s.scale); },
                        [](const CappedSimplex& s) {
                          return fmt::format("capped-simplex(dim={}, budget={})", s.capacities.size(), s.budget);
                        },
                        [](const Unconstrained& u) { return fmt::format("unconstrained(dim={})", u.dim); },
                        [](const Product& p) {
                          std::string out = "product(";
                          for (std::size_t i = 0; i < p.blocks.size(); ++i) {
                            if (i) out += ", ";
                            out += p.blocks[i].describe();
                          }
                          return out + ")";
                        },
                    },
                    kind_);
}

bool FeasibleSet::bounded() const {
  if (std::holds_alternative<Unconstrained>(kind_)) return false;
  if (const auto* p = std::get_if<Product>(&kind_)) {
    return std::all_of(p->blocks.begin(), p->blocks.end(), [](const FeasibleSet& b) { return b.bounded(); });
  }
  return true;
}

std::vector<Eigen::Index> FeasibleSet::offsets() const {
  std::vector<Eigen::Index> out{0};
  if (const auto* p = std::get_if<Product>(&kind_)) {
    for (const auto& b : p->blocks) out.push_back(out.back() + b.dimension());
  } else {
    out.push_back(dimension());
  }
  return out;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dimension() || !x.allFinite()) return false;
  return std::visit(Overloaded{
                        [&](const Ball& b) { return (x - b.center).norm() <= b.radius + tol; },
                        [&](const NonnegativeBall& b) { return x.minCoeff() >= 0.0 && x.norm() <= b.radius + tol; },
                        [&](const Simplex& s) {
                          return x.minCoeff() >= 0.0 && std::abs(x.sum() - s.scale) <= tol * std::max(1.0, s.scale);
                        },
                        [&](const CappedSimplex& s) {
                          return x.minCoeff() >= 0.0 && (x.array() < s.capacities.array()).all() &&
                                 std::abs(x.sum() - s.budget) <= tol * std::max(1.0, s.budget);
                        },
                        [&](const Unconstrained&) { return true; },
                        [&](const Product& p) {
                          Eigen::Index off = 0;
                          for (const auto& b : p.blocks) {
                            const auto n = b.dimension();
                            if (!b.contains(x.segment(off, n), tol)) return false;
                            off += n;
                          }
                          return true;
                        },
                    },
                    kind_);
}

double FeasibleSet::support(const Vector& g) const {
  require(g.size() == dimension(), ErrorCode::kInvalidArgument, "support: dimension mismatch");
  return std::visit(Overloaded{
                        [&](const Ball& b) { return g.dot(b.center) + b.radius * g.norm(); },
                        [&](const NonnegativeBall& b) { return b.radius * g.cwiseMax(0.0).norm(); },
                        [&](const Simplex& s) { return s.scale * g.maxCoeff(); },
                        [&](const CappedSimplex& s) {
                          return g.dot(greedy_fill(s.capacities, s.budget, sorted_indices(g, true)));
                        },
                        [&](const Unconstrained&) { return g.isZero(0.0) ? 0.0 : kInf; },
                        [&](const Product& p) {
                          double total = 0.0;
                          Eigen::Index off = 0;
                          for (const auto& b : p.blocks) {
                            const auto n = b.dimension();
                            total += b.support(g.segment(off, n));
                            off += n;
                          }
                          return total;
                        },
                    },
                    kind_);
}

Point FeasibleSet::lmo(const Vector& g) const {
  require(g.size() == dimension(), ErrorCode::kInvalidArgument, "lmo: dimension mismatch");
  return std::visit(Overloaded{
                        [&](const Ball& b) -> Vector {
                          const double gn = g.norm();
                          if (gn == 0.0) return b.center;
                          return b.center - (b.radius / gn) * g;
                        },
                        [&](const NonnegativeBall& b) -> Vector {
                          const Vector p = (-g).cwiseMax(0.0);
                          const double pn = p.norm();
                          if (pn == 0.0) return Vector::Zero(b.dim);
                          return (b.radius / pn) * p;
                        },
                        [&](const Simplex& s) -> Vector {
                          Eigen::Index j = 0;
                          for (Eigen::Index i = 1; i < g.size(); ++i)
                            if (g[i] < g[j]) j = i;
                          Vector x = Vector::Zero(s.dim);
                          x[j] = s.scale;
                          return x;
                        },
                        [&](const CappedSimplex& s) -> Vector {
                          return greedy_fill(s.capacities, s.budget, sorted_indices(g, false));
                        },
                        [&](const Unconstrained&) -> Vector {
                          fail(ErrorCode::kUnsupportedSet, "no linear minimization oracle on an unbounded set");
                        },
                        [&](const Product& p) -> Vector {
                          Vector x(dimension());
                          Eigen::Index off = 0;
                          for (const auto& b : p.blocks) {
                            const auto n = b.dimension();
                            x.segment(off, n) = b.lmo(g.segment(off, n));
                            off += n;
                          }
                          return x;
                        },
                    },
                    kind_);
}

Point FeasibleSet::project(const Vector& x) const {
  require(x.size() == dimension(), ErrorCode::kInvalidArgument, "project: dimension mismatch");
  return std::visit(Overloaded{
                        [&](const Ball& b) -> Vector {
                          const double dist = (x - b.center).norm();
                          if (dist <= b.radius) return x;
                          return b.center + (b.radius / dist) * (x - b.center);
                        },
                        [&](const NonnegativeBall& b) -> Vector {
                          Vector p = x.cwiseMax(0.0);
                          const double pn = p.norm();
                          if (pn > b.radius) p *= b.radius / pn;
                          return p;
                        },
                        [&](const Simplex& s) -> Vector { return project_simplex(x, s.scale); },
                        [&](const CappedSimplex& s) -> Vector { return project_capped(x, s.capacities, s.budget); },
                        [&](const Unconstrained&) -> Vector { return x; },
                        [&](const Product& p) -> Vector {
                          Vector out(x.size());
                          Eigen::Index off = 0;
                          for (const auto& b : p.blocks) {
                            const auto n = b.dimension();
                            out.segment(off, n) = b.project(x.segment(off, n));
                            off += n;
                          }
                          return out;
                        },
                    },
                    kind_);
}

Point FeasibleSet::sample(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const Ball& b) -> Vector {
            const auto n = b.center.size();
            Vector dir = rng.normal_vector(n);
            const double r = b.radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(n));
            return b.center + (r / dir.norm()) * dir;
          },
          [&](const NonnegativeBall& b) -> Vector {
            Vector dir = rng.normal_vector(b.dim).cwiseAbs();
            const double r = b.radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(b.dim));
            return (r / dir.norm()) * dir;
          },
          [&](const Simplex& s) -> Vector {
            Vector e(s.dim);
            for (Eigen::Index i = 0; i < s.dim; ++i) e[i] = -std::log(1.0 - rng.uniform01());
            return (s.scale / e.sum()) * e;
          },
          [&](const CappedSimplex& s) -> Vector {
            // Box sample moved onto the budget hyperplane, then pulled toward the
            // center just enough to stay strictly inside the capacities.
            const auto n = s.capacities.size();
            const Vector center = s.capacities * (s.budget / s.capacities.sum());
            Vector z(n);
            for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.uniform(0.0, s.capacities[i]);
            const Vector dir = z - center - s.capacities * ((z.sum() - s.budget) / s.capacities.sum());
            double t = 1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
              const double hi = s.capacities[i] * (1.0 - 1e-9);
              if (dir[i] > 0) t = std::min(t, (hi - center[i]) / dir[i]);
              if (dir[i] < 0) t = std::min(t, -center[i] / dir[i]);
            }
            return center + t * dir;
          },
          [&](const Unconstrained& u) -> Vector { return rng.normal_vector(u.dim); },
          [&](const Product& p) -> Vector {
            Vector x(dimension());
            Eigen::Index off = 0;
            for (const auto& b : p.blocks) {
              const auto n = b.dimension();
              x.segment(off, n) = b.sample(rng);
              off += n;
            }
            return x;
          },
      },
      kind_);
}

double FeasibleSet::diameter_sq() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return 4.0 * b.radius * b.radius; },
                        [](const NonnegativeBall& b) { return (b.dim > 1 ? 2.0 : 1.0) * b.radius * b.radius; },
                        [](const Simplex& s) { return (s.dim > 1 ? 2.0 : 0.0) * s.scale * s.scale; },
                        [](const CappedSimplex& s) { return s.capacities.squaredNorm(); },
                        [](const Unconstrained&) { return kInf; },
                        [](const Product& p) {
                          double total = 0.0;
                          for (const auto& b : p.blocks) total += b.diameter_sq();
                          return total;
                        },
                    },
                    kind_);
}

std::optional<FeasibleSet> FeasibleSet::affine_image(const Vector& shift, double scale) const {
  require(scale > 0 && shift.size() == dimension(), ErrorCode::kInvalidArgument, "affine_image: bad arguments");
  if (const auto* b = std::get_if<Ball>(&kind_)) {
    return FeasibleSet(Ball{(b->center - shift) / scale, b->radius / scale});
  }
  if (std::holds_alternative<Unconstrained>(kind_)) return *this;
  if (const auto* p = std::get_if<Product>(&kind_)) {
    std::vector<FeasibleSet> blocks;
    Eigen::Index off = 0;
    for (const auto& blk : p->blocks) {
      const auto n = blk.dimension();
      auto img = blk.affine_image(shift.segment(off, n), scale);
      if (!img) return std::nullopt;
      blocks.push_back(std::move(*img));
      off += n;
    }
    return FeasibleSet(Product{std::move(blocks)});
  }
  return std::nullopt;
}

Point linear_minimization_oracle(const FeasibleSet& q, const Vector& g) { return q.lmo(g); }

}  // namespace inexact
