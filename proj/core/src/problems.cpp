#include "inexact/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "inexact/errors.hpp"
#include "inexact/rng.hpp"

namespace inexact {

const VIModel* ProblemInstance::vi() const {
  if (const auto* v = std::get_if<VIModel>(&model)) return v;
  if (const auto* s = std::get_if<SaddleModel>(&model)) return &s->vi;
  return nullptr;
}

namespace {

constexpr double kReferenceTolerance = 1e-8;
constexpr std::uint64_t kReferenceStream = 97;

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

Matrix normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool folded) {
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double z = rng.normal();
      M(i, j) = folded ? std::abs(z) : z;
    }
  return M;
}

Matrix uniform_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
  return M;
}

Vector first_order_direction(const ProblemInstance& inst, const Point& x) {
  if (const auto* obj = inst.objective()) return obj->psi_subgradient(x, x);
  const VIModel* vi = inst.vi();
  return vi->op ? vi->op(x) : vi->psi_subgradient(x, x);
}

// min over sampled x in Q of <v, x - x*> must stay above -1e-8.
void verify_reference(const ProblemInstance& inst) {
  if (!inst.reference.x_star) return;
  const Point& xs = *inst.reference.x_star;
  require(inst.q.contains(xs, 1e-9), ErrorCode::kInvalidArgument,
          fmt::format("{}: reference point is not feasible", inst.name));
  const Vector v = first_order_direction(inst, xs);
  const FeasibleSet& region = inst.q.bounded() ? inst.q : inst.sampling_region;
  Rng rng(42, kReferenceStream);
  double worst = region.contains(xs, 1e-9) ? 0.0 : std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) worst = std::min(worst, v.dot(region.sample(rng) - xs));
  if (inst.q.bounded()) worst = std::min(worst, -inst.q.support(-v) - v.dot(xs));
  require(worst >= -kReferenceTolerance, ErrorCode::kInvalidArgument,
          fmt::format("{}: reference fails the first-order check (min <g, x - x*> = {:.3e})", inst.name, worst));
}

// Geometric objectives f with a deterministic subgradient selection: the
// lowest active index for the max-type objective, 0 at kinks of the norms.
struct GeometricObjective {
  GeometricKind kind;
  Matrix points;

  double value(const Vector& u) const {
    double out = 0.0;
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
      const double r = (u - points.row(k).transpose()).norm();
      out = kind == GeometricKind::kCoveringCircle ? std::max(out, r) : out + r;
    }
    return out;
  }

  Vector subgradient(const Vector& u) const {
    Vector g = Vector::Zero(u.size());
    if (kind != GeometricKind::kCoveringCircle) {
      for (Eigen::Index k = 0; k < points.rows(); ++k) {
        const Vector diff = u - points.row(k).transpose();
        const double r = diff.norm();
        if (r > 0.0) g += diff / r;
      }
      return g;
    }
    Eigen::Index best = 0;
    double top = -1.0;
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
      const double r = (u - points.row(k).transpose()).norm();
      if (r > top) {
        top = r;
        best = k;
      }
    }
    if (top > 0.0) g = (u - points.row(best).transpose()) / top;
    return g;
  }

  // Bound on ||s(u) - s(u')|| over subgradient selections.
  double variation() const {
    return kind == GeometricKind::kFermatTorricelli ? 2.0 * static_cast<double>(points.rows()) : 2.0;
  }
};

Vector sign_of(const Vector& u) { return u.unaryExpr([](double t) { return double((t > 0) - (t < 0)); }); }

// Lagrangian L(u, lambda) = f(u) + <lambda, alpha |u| - 1> over
// ball(radius) x nonnegative unit ball, or with phi(u) = alpha u - 1 when
// `linear_constraints` is set.
struct Lagrangian {
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad_f;
  Matrix alpha;
  bool linear_constraints = false;

  Vector phi(const Vector& u) const {
    const Vector a = linear_constraints ? u : Vector(u.cwiseAbs());
    return (alpha * a).array() - 1.0;
  }
  Vector grad_u(const Vector& u, const Vector& lam) const {
    Vector g = grad_f(u);
    const Vector w = alpha.transpose() * lam;
    if (linear_constraints) return g + w;
    return g + w.cwiseProduct(sign_of(u));
  }
};

SaddleModel lagrangian_model(const Lagrangian& lag, double delta) {
  const auto n1 = lag.alpha.cols();
  const auto n2 = lag.alpha.rows();
  SaddleModel s;
  s.n_primal = n1;
  s.n_dual = n2;
  s.vi.op = [lag, n1, n2](const Point& z) -> Vector {
    Vector g(n1 + n2);
    g << lag.grad_u(z.head(n1), z.tail(n2)), -lag.phi(z.head(n1));
    return g;
  };
  auto op = s.vi.op;
  s.vi.psi = [op](const Point& x, const Point& y) { return op(y).dot(x - y); };
  s.vi.psi_subgradient = [op](const Point&, const Point& y) -> Vector { return op(y); };
  s.vi.slice = [op](const Point& y) {
    ModelSlice sl;
    sl.linear = op(y);
    return sl;
  };
  s.vi.delta = delta;
  s.f = [lag](const Vector& u, const Vector& v) { return lag.f(u) + v.dot(lag.phi(u)); };
  s.grad_u = [lag](const Vector& u, const Vector& v) -> Vector { return lag.grad_u(u, v); };
  s.grad_v = [lag](const Vector& u, const Vector&) -> Vector { return lag.phi(u); };
  s.gap.max_over_v = [lag](const Vector& u) { return lag.f(u) + lag.phi(u).cwiseMax(0.0).norm(); };
  return s;
}

void fill_product_geometry(ProblemInstance& inst, Eigen::Index n, Eigen::Index m, double radius) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n + m));
  if (m == 0) {
    inst.q = FeasibleSet::ball(Vector::Zero(n), radius);
    inst.start = Vector::Constant(n, scale);
    const double r0 = inst.start.norm();
    inst.reference.divergence_bound = 0.5 * (radius + r0) * (radius + r0);
  } else {
    inst.q = FeasibleSet::product({FeasibleSet::ball(Vector::Zero(n), radius), FeasibleSet::nonnegative_ball(m)});
    inst.start = Vector::Constant(n + m, scale);
    const double ru = inst.start.head(n).norm();
    const double rl = inst.start.tail(m).norm();
    inst.reference.divergence_bound = 0.5 * (radius + ru) * (radius + ru) + 0.5 * (1.0 + rl) * (1.0 + rl);
  }
  inst.sampling_region = inst.q;
  inst.setup = euclidean_setup();
}

const char* geometric_name(GeometricKind kind) {
  switch (kind) {
    case GeometricKind::kCoveringCircle:
      return "covering_circle";
    case GeometricKind::kFermatTorricelli:
      return "fermat_torricelli";
    case GeometricKind::kBestApproximation:
      return "best_approximation";
  }
  return "geometric";
}

Matrix column(const Vector& v) { return Matrix(v); }

}  // namespace

ProblemInstance make_geometric(GeometricKind kind, const GeometricData& data, double delta) {
  const auto n = data.points.cols();
  const auto m = data.alpha.rows();
  require(n >= 1 && data.points.rows() >= 1, ErrorCode::kInvalidArgument, "geometric problem: need n, N >= 1");
  require(m == 0 || data.alpha.cols() == n, ErrorCode::kInvalidArgument, "geometric problem: alpha must be m x n");
  require((data.alpha.array() >= 0.0).all(), ErrorCode::kInvalidArgument, "geometric problem: alpha must be >= 0");
  require(delta > 0 && data.radius > 0, ErrorCode::kInvalidArgument, "geometric problem: need delta, radius > 0");

  const GeometricObjective obj{kind, data.points};
  auto f = [obj](const Vector& u) { return obj.value(u); };
  auto grad = [obj](const Vector& u) { return obj.subgradient(u); };

  ProblemInstance inst;
  inst.name = geometric_name(kind);
  inst.params = {{"n", double(n)}, {"m", double(m)}, {"N", double(data.points.rows())}, {"delta", delta},
                 {"radius", data.radius}};
  inst.data["points"] = data.points;
  inst.data["alpha"] = data.alpha;
  fill_product_geometry(inst, n, m, data.radius);

  const double alpha_norm = spectral_norm(data.alpha);
  const double M0 = obj.variation() + 2.0 * alpha_norm;
  inst.smoothness = M0 * M0 / (2.0 * delta) + alpha_norm;
  if (m == 0) {
    ObjectiveModel model = model_from_gradient(f, grad);
    model.delta = delta;
    model.smoothness = inst.smoothness;
    inst.model = std::move(model);
    inst.truth = GroundTruth{f};
  } else {
    SaddleModel model = lagrangian_model(Lagrangian{f, grad, data.alpha, false}, delta);
    model.vi.smoothness = inst.smoothness;
    inst.model = std::move(model);
  }
  return inst;
}

namespace {

ProblemInstance seeded_geometric(GeometricKind kind, int n, int m, int N, std::uint64_t seed, double delta) {
  require(n >= 1 && m >= 0 && N >= 1, ErrorCode::kInvalidArgument, "geometric problem: need n, N >= 1 and m >= 0");
  Rng points_rng(seed, 0);
  Rng alpha_rng(seed, 1);
  GeometricData data;
  data.points = normal_matrix(points_rng, N, n, false);
  data.alpha = normal_matrix(alpha_rng, m, n, true);
  ProblemInstance inst = make_geometric(kind, data, delta);
  inst.seed = seed;
  return inst;
}

}  // namespace

ProblemInstance make_covering_circle(int n, int m, int N, std::uint64_t seed, double delta) {
  return seeded_geometric(GeometricKind::kCoveringCircle, n, m, N, seed, delta);
}

ProblemInstance make_fermat_torricelli(int n, int m, int N, std::uint64_t seed, double delta) {
  return seeded_geometric(GeometricKind::kFermatTorricelli, n, m, N, seed, delta);
}

ProblemInstance make_best_approximation(int n, int m, std::uint64_t seed, double delta) {
  return seeded_geometric(GeometricKind::kBestApproximation, n, m, 1, seed, delta);
}

double quartic_smoothness(const Matrix& A, const Vector& b, const Matrix& C) {
  const double a = spectral_norm(A);
  const double nb = b.norm();
  const double c = spectral_norm(C);
  return 3 * std::pow(a, 4) + 6 * std::pow(a, 3) * nb + 3 * a * a * nb * nb + c * c;
}

ProblemInstance make_quartic(const QuarticData& data, bool constrained) {
  const auto n = data.A.cols();
  require(n >= 1 && data.A.rows() == data.b.size() && data.C.cols() == n && data.C.rows() == data.d.size(),
          ErrorCode::kInvalidArgument, "quartic problem: inconsistent shapes");
  const Matrix A = data.A, C = data.C;
  const Vector b = data.b, d = data.d;
  auto f = [A, b, C, d](const Vector& x) {
    const Vector r = A * x - b;
    return 0.25 * r.array().pow(4).sum() + 0.5 * (C * x - d).squaredNorm();
  };
  auto grad = [A, b, C, d](const Vector& x) -> Vector {
    const Vector r = A * x - b;
    return A.transpose() * r.array().cube().matrix() + C.transpose() * (C * x - d);
  };

  ProblemInstance inst;
  inst.params = {{"n", double(n)}, {"constrained", constrained ? 1.0 : 0.0}};
  inst.data = {{"A", A}, {"C", C}, {"b", column(b)}, {"d", column(d)}};
  const double L = quartic_smoothness(A, b, C);
  if (!constrained) {
    inst.name = "quartic";
    ObjectiveModel model = model_from_gradient(f, grad);
    model.smoothness = L;
    inst.model = std::move(model);
    inst.smoothness = L;
    inst.truth = GroundTruth{f};
    inst.setup = quartic_setup();
    inst.q = FeasibleSet::unconstrained(n);
    inst.sampling_region = FeasibleSet::unit_ball(n);
    inst.start = Vector::Zero(n);
    return inst;
  }
  const auto m = data.alpha.rows();
  require(m >= 1 && data.alpha.cols() == n, ErrorCode::kInvalidArgument, "quartic problem: alpha must be m x n");
  inst.name = "quartic_constrained";
  inst.params["m"] = double(m);
  inst.data["alpha"] = data.alpha;
  fill_product_geometry(inst, n, m, 1.0);
  inst.smoothness = L + spectral_norm(data.alpha);
  SaddleModel model = lagrangian_model(Lagrangian{f, grad, data.alpha, true}, 0.0);
  model.vi.smoothness = inst.smoothness;
  inst.model = std::move(model);
  return inst;
}

ProblemInstance make_quartic_relative(int n, std::uint64_t seed, bool constrained, int m) {
  require(n >= 1, ErrorCode::kInvalidArgument, "quartic problem: need n >= 1");
  QuarticData data;
  Rng ra(seed, 0), rc(seed, 1), rb(seed, 2), rd(seed, 3), ral(seed, 4);
  data.A = uniform_matrix(ra, n, n, 0.95, 1.05);
  data.C = uniform_matrix(rc, n, n, 0.95, 1.05);
  data.b = rb.uniform_vector(n, 0.95, 1.05);
  data.d = rd.uniform_vector(n, 0.95, 1.05);
  if (constrained) {
    require(m >= 1, ErrorCode::kInvalidArgument, "quartic problem: constrained arm needs m >= 1");
    data.alpha = normal_matrix(ral, m, n, true);
  }
  ProblemInstance inst = make_quartic(data, constrained);
  inst.seed = seed;
  return inst;
}

namespace {

Eigen::LLT<Matrix> design_factor(const Matrix& H, const Vector& x) {
  return Eigen::LLT<Matrix>(H * x.asDiagonal() * H.transpose());
}

bool nonsingular(const Eigen::LLT<Matrix>& llt) { return llt.info() == Eigen::Success && llt.rcond() > 1e-13; }

}  // namespace

ProblemInstance make_d_optimal_from(const Matrix& H, std::uint64_t seed) {
  const auto m = H.rows();
  const auto n = H.cols();
  require(m >= 1 && m <= n, ErrorCode::kInvalidArgument, "d-optimal design: need 1 <= m <= n");
  const Vector x0 = Vector::Constant(n, 1.0 / double(n));
  if (!nonsingular(design_factor(H, x0)))
    fail(ErrorCode::kSingularDesign, "d-optimal design: H X H^T is singular at the start");

  auto f = [H](const Vector& x) {
    if ((x.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    const auto llt = design_factor(H, x);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Matrix& L = llt.matrixLLT();
    return -2.0 * L.diagonal().array().log().sum();
  };
  auto grad = [H](const Vector& x) -> Vector {
    const auto llt = design_factor(H, x);
    if (llt.info() != Eigen::Success) fail(ErrorCode::kDomainError, "d-optimal design: H X H^T is not positive definite");
    const Matrix W = llt.matrixL().solve(H);
    return -W.colwise().squaredNorm().transpose();
  };

  ProblemInstance inst;
  inst.name = "d_optimal";
  inst.seed = seed;
  inst.params = {{"m", double(m)}, {"n", double(n)}};
  inst.data["H"] = H;
  ObjectiveModel model = model_from_gradient(f, grad);
  model.smoothness = 1.0;
  inst.model = std::move(model);
  inst.smoothness = 1.0;
  inst.truth = GroundTruth{f};
  inst.setup = log_barrier_setup();
  inst.q = FeasibleSet::simplex(n);
  inst.sampling_region = inst.q;
  inst.start = x0;
  if (m == n && H.isIdentity(0.0)) {
    inst.reference.x_star = x0;
    inst.reference.f_star = double(n) * std::log(double(n));
    verify_reference(inst);
  }
  return inst;
}

ProblemInstance make_d_optimal(int m, int n, std::uint64_t seed) {
  require(m >= 1 && m <= n, ErrorCode::kInvalidArgument, "d-optimal design: need 1 <= m <= n");
  const Vector x0 = Vector::Constant(n, 1.0 / double(n));
  for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
    Rng diag(seed, 3 * attempt), mask(seed, 3 * attempt + 1), value(seed, 3 * attempt + 2);
    Matrix H = Matrix::Zero(m, n);
    for (int i = 0; i < m; ++i) H(i, i) = i < m / 2 ? diag.uniform(0.0, 1.0) : diag.uniform(0.0, 200.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (mask.uniform01() < 0.05) H(i, j) = value.uniform01();
      }
    if (!nonsingular(design_factor(H, x0))) continue;
    ProblemInstance inst = make_d_optimal_from(H, seed);
    inst.params["attempt"] = double(attempt);
    return inst;
  }
  fail(ErrorCode::kSingularDesign, "d-optimal design: no full-rank H after 10 draws");
}

ProblemInstance make_resource_sharing(int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "resource sharing: need n >= 1");
  const double cap = std::sqrt(3.0) / 2.0;
  const Vector alpha = Vector::Constant(n, cap);
  auto g = [alpha](const Point& x) -> Vector { return (alpha - x).cwiseInverse(); };

  ProblemInstance inst;
  inst.name = "resource_sharing";
  inst.params = {{"n", double(n)}, {"alpha", cap}, {"R", 0.5 * n}};
  inst.data["alpha"] = column(alpha);
  VIModel model = vi_model_from_operator(g);
  model.smoothness = 0.5;
  inst.model = std::move(model);
  inst.smoothness = 0.5;
  inst.setup = inverse_gap_setup();
  inst.q = FeasibleSet::capped_simplex(alpha, 0.5 * n);
  inst.sampling_region = inst.q;
  inst.start = Vector::Constant(n, 0.5);
  inst.reference.x_star = inst.start;
  inst.reference.divergence_bound = 4.0 * n;
  verify_reference(inst);
  return inst;
}

ProblemInstance make_traffic_from(const Matrix& A, const Vector& b, double m_reg) {
  const auto n = A.cols();
  require(n >= 2 && A.rows() == b.size(), ErrorCode::kInvalidArgument, "traffic problem: need n >= 2, A rows = |b|");
  require(m_reg >= 0, ErrorCode::kInvalidArgument, "traffic problem: m must be >= 0");
  auto g = [A, b](const Point& x) { return 0.5 * (A * x - b).squaredNorm(); };
  auto grad = [A, b](const Point& x) -> Vector { return A.transpose() * (A * x - b); };
  const SetupPtr entropy = entropy_setup();

  ProblemInstance inst;
  inst.name = "traffic";
  inst.params = {{"n", double(n)}, {"m_reg", m_reg}};
  inst.data = {{"A", A}, {"b", column(b)}};
  const double L = A.colwise().squaredNorm().maxCoeff();
  ObjectiveModel model = model_composite(g, grad, DistanceTerm{m_reg, entropy}, m_reg);
  model.smoothness = L;
  inst.truth = GroundTruth{model.f_delta};
  inst.model = std::move(model);
  inst.smoothness = L;
  inst.setup = entropy;
  inst.q = FeasibleSet::simplex(n);
  inst.sampling_region = inst.q;
  inst.start = Vector::Constant(n, 1.0 / double(n));
  if (A.isZero(0.0) && b.isZero(0.0)) {
    inst.reference.x_star = inst.start;
    inst.reference.f_star = -m_reg * std::log(double(n));
    verify_reference(inst);
  }
  return inst;
}

ProblemInstance make_traffic_composite(int n, std::uint64_t seed, double m_reg) {
  require(n >= 2, ErrorCode::kInvalidArgument, "traffic problem: need n >= 2");
  Rng ra(seed, 0), rb(seed, 1);
  const Matrix A = normal_matrix(ra, n, n, false);
  const Vector b = rb.normal_vector(n);
  ProblemInstance inst = make_traffic_from(A, b, m_reg);
  inst.seed = seed;
  return inst;
}

ProblemInstance attach_reference(ProblemInstance instance, Reference reference) {
  instance.reference = std::move(reference);
  verify_reference(instance);
  return instance;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, double>& p, const std::string& key, int fallback) {
  const double v = param(p, key, fallback);
  require(v == std::floor(v), ErrorCode::kInvalidArgument, fmt::format("parameter {} must be an integer", key));
  return static_cast<int>(v);
}

}  // namespace

std::vector<std::string> problem_names() {
  return {"covering_circle", "fermat_torricelli", "best_approximation", "quartic", "quartic_constrained",
          "d_optimal",       "resource_sharing",  "traffic"};
}

ProblemInstance make_problem(const std::string& name, const std::map<std::string, double>& p, std::uint64_t seed) {
  const double delta = param(p, "delta", 1e-2);
  if (name == "covering_circle")
    return make_covering_circle(int_param(p, "n", 100), int_param(p, "m", 100), int_param(p, "N", 50), seed, delta);
  if (name == "fermat_torricelli")
    return make_fermat_torricelli(int_param(p, "n", 100), int_param(p, "m", 100), int_param(p, "N", 50), seed, delta);
  if (name == "best_approximation")
    return make_best_approximation(int_param(p, "n", 500), int_param(p, "m", 100), seed, delta);
  if (name == "quartic") return make_quartic_relative(int_param(p, "n", 100), seed, false);
  if (name == "quartic_constrained")
    return make_quartic_relative(int_param(p, "n", 100), seed, true, int_param(p, "m", 10));
  if (name == "d_optimal") return make_d_optimal(int_param(p, "m", 100), int_param(p, "n", 200), seed);
  if (name == "resource_sharing") return make_resource_sharing(int_param(p, "n", 100));
  if (name == "traffic") return make_traffic_composite(int_param(p, "n", 50), seed, param(p, "m_reg", 0.1));
  fail(ErrorCode::kUnknownProblem, fmt::format("unknown problem '{}'", name));
}

ValidationReport validate_instance(const ProblemInstance& inst, const ValidationOptions& options) {
  ValidationOptions opt = options;
  if (!opt.L_candidate) opt.L_candidate = inst.smoothness;
  if (const auto* obj = inst.objective()) return validate_model(*obj, *inst.setup, inst.sampling_region, opt, inst.truth);
  if (const auto* s = inst.saddle()) return validate_model(*s, *inst.setup, inst.sampling_region, opt);
  return validate_model(*inst.vi(), *inst.setup, inst.sampling_region, opt);
}

}  // namespace inexact
