#include "inexact/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "inexact/errors.hpp"
#include "inexact/rng.hpp"

namespace inexact {
namespace {

class Tracker {
 public:
  Tracker(std::string name, const ValidationOptions& opt)
      : opt_(opt), tolerance_(opt.tolerance) {
    result_.name = std::move(name);
  }
  Tracker(std::string name, const ValidationOptions& opt, double tolerance) : opt_(opt), tolerance_(tolerance) {
    result_.name = std::move(name);
  }

  // `scale` is the magnitude of the terms that produced the violation;
  // differences below their rounding error are not counted.
  void add(double violation, double scale = 0.0) {
    violation -= 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    result_.max_violation = result_.samples == 0 ? violation : std::max(result_.max_violation, violation);
    ++result_.samples;
  }
  CheckResult finish() {
    result_.seed = opt_.seed;
    result_.passed = result_.max_violation <= tolerance_;
    return result_;
  }

 private:
  const ValidationOptions& opt_;
  double tolerance_;
  CheckResult result_;
};

struct Sampler {
  Sampler(const ProxSetup& s, const FeasibleSet& r, const ValidationOptions& o, std::uint64_t stream)
      : setup(s), region(r), opt(o), rng(o.seed, stream) {}

  Point point() { return setup.clamp_interior(region.sample(rng)); }
  // x, y independent unless diagonal sampling is requested.
  std::pair<Point, Point> pair() {
    Point x = point();
    if (opt.pairs == PairSampling::kDiagonal) return {x, x};
    return {x, point()};
  }
  std::array<Point, 3> triple() {
    Point x = point();
    if (opt.pairs == PairSampling::kDiagonal) return {x, x, x};
    Point y = point();
    return {x, y, point()};
  }

  const ProxSetup& setup;
  const FeasibleSet& region;
  const ValidationOptions& opt;
  Rng rng;
};

void check_options(const ValidationOptions& opt) {
  require(opt.samples >= 1, ErrorCode::kInvalidArgument, "validation needs at least one sample");
  require(opt.tolerance >= 0, ErrorCode::kInvalidArgument, "validation tolerance must be nonnegative");
}

template <class Psi>
void psi_basics(Psi psi, const ProxSetup& setup, const FeasibleSet& region, const ValidationOptions& opt,
                ValidationReport& report) {
  Sampler s(setup, region, opt, 1);
  Tracker diag("psi_diagonal", opt);
  Tracker conv("psi_convexity", opt);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const Point x = s.point();
    diag.add(std::abs(psi(x, x)));
    auto [a, b] = s.pair();
    const Point y = opt.pairs == PairSampling::kDiagonal ? a : s.point();
    const Point mid = 0.5 * (a + b);
    const double pm = psi(mid, y), pa = psi(a, y), pb = psi(b, y);
    conv.add(pm - 0.5 * pa - 0.5 * pb, std::abs(pm) + 0.5 * std::abs(pa) + 0.5 * std::abs(pb));
  }
  report.checks.push_back(diag.finish());
  report.checks.push_back(conv.finish());
}

void vi_checks(const VIModel& vi, const ProxSetup& setup, const FeasibleSet& region, const ValidationOptions& opt,
               ValidationReport& report) {
  psi_basics(vi.psi, setup, region, opt, report);

  Sampler s(setup, region, opt, 2);
  Tracker mono("delta_monotone", opt);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    auto [x, y] = s.pair();
    const double nrm = setup.norm(x - y);
    mono.add(vi.psi(x, y) + vi.psi(y, x) + vi.mu * nrm * nrm - vi.delta);
  }
  report.checks.push_back(mono.finish());

  if (opt.L_candidate) {
    const double L = *opt.L_candidate;
    Sampler t(setup, region, opt, 3);
    Tracker smooth("relative_smoothness", opt);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto [x, y, z] = t.triple();
      smooth.add(vi.psi(x, y) - vi.psi(x, z) - vi.psi(z, y) - L * setup.bregman(z, x) - L * setup.bregman(y, z) -
                 vi.delta);
    }
    report.checks.push_back(smooth.finish());
  }

  if (vi.psi_true) {
    Sampler t(setup, region, opt, 4);
    Tracker dom("psi_true_dominated", opt);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto [x, y] = t.pair();
      dom.add(vi.psi_true(x, y) - vi.psi(x, y) - vi.delta);
    }
    report.checks.push_back(dom.finish());
  }
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json out;
  out["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    out["checks"].push_back({{"name", c.name},
                             {"max_violation", c.max_violation},
                             {"samples", c.samples},
                             {"seed", c.seed},
                             {"passed", c.passed}});
  }
  out["passed"] = passed();
  return out;
}

ValidationReport validate_model(const ObjectiveModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& opt, const std::optional<GroundTruth>& truth) {
  check_options(opt);
  if (opt.L_candidate && !truth)
    fail(ErrorCode::kGroundTruthRequired, "the sandwich upper bound needs the exact objective");
  ValidationReport report;
  psi_basics(model.psi, setup, region, opt, report);

  if (truth) {
    Sampler s(setup, region, opt, 2);
    Tracker lower("sandwich_lower", opt);
    Tracker upper("sandwich_upper", opt);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto [x, y] = s.pair();
      const double gap = truth->f(x) - model.f_delta(y) - model.psi(x, y);
      const double v = setup.bregman(y, x);
      lower.add(model.mu * v - gap);
      if (opt.L_candidate) {
        double bound = 0.0;
        if (model.variant == ModelVariant::kBregman) {
          bound = *opt.L_candidate * v;
        } else {
          const double nrm = setup.norm(x - y);
          bound = 0.5 * *opt.L_candidate * nrm * nrm;
        }
        upper.add(gap - bound - model.delta);
      }
    }
    report.checks.push_back(lower.finish());
    if (opt.L_candidate) report.checks.push_back(upper.finish());
  }

  if (model.m > 0) {
    Sampler s(setup, region, opt, 3);
    Tracker rsc("relative_strong_convexity", opt);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto [x, y, z] = s.triple();
      const Vector g = model.psi_subgradient(z, y);
      rsc.add(model.psi(z, y) + g.dot(x - z) + model.m * setup.bregman(z, x) - model.psi(x, y));
    }
    report.checks.push_back(rsc.finish());
  }
  return report;
}

ValidationReport validate_model(const VIModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& opt) {
  check_options(opt);
  ValidationReport report;
  vi_checks(model, setup, region, opt, report);
  return report;
}

ValidationReport validate_model(const SaddleModel& model, const ProxSetup& setup, const FeasibleSet& region,
                                const ValidationOptions& opt) {
  check_options(opt);
  ValidationReport report;
  vi_checks(model.vi, setup, region, opt, report);

  const auto n1 = model.n_primal;
  const auto n2 = model.n_dual;
  Sampler s(setup, region, opt, 5);
  Tracker link("saddle_gap_link", opt);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    auto [x, y] = s.pair();
    const double lhs = model.f(y.head(n1), x.tail(n2)) - model.f(x.head(n1), y.tail(n2));
    link.add(lhs + model.vi.psi(x, y) - model.vi.delta);
  }
  report.checks.push_back(link.finish());
  return report;
}

ValidationReport validate_setup(const ProxSetup& setup, const FeasibleSet& region, const ValidationOptions& opt) {
  check_options(opt);
  ValidationReport report;
  Sampler s(setup, region, opt, 6);
  Tracker nonneg("divergence_nonnegative", opt);
  Tracker diag("divergence_diagonal", opt);
  Tracker sc("strong_convexity", opt);
  Tracker three("three_point_identity", opt, 1e-9);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    auto [x, y, z] = s.triple();
    const double vyx = setup.bregman(y, x);
    nonneg.add(-vyx);
    diag.add(std::abs(setup.bregman(x, x)));
    if (setup.strongly_convex_1()) {
      const double nrm = setup.norm(x - y);
      sc.add(0.5 * nrm * nrm - vyx);
    }
    const double lhs = (setup.grad_d(y) - setup.grad_d(z)).dot(y - x);
    const double vzy = setup.bregman(z, y);
    const double vzx = setup.bregman(z, x);
    const double rhs = vzy + vyx - vzx;
    const double scale = std::max({1.0, std::abs(lhs), vzy, vyx, vzx});
    three.add(std::abs(lhs - rhs) / scale);
  }
  report.checks.push_back(nonneg.finish());
  report.checks.push_back(diag.finish());
  if (setup.strongly_convex_1()) report.checks.push_back(sc.finish());
  report.checks.push_back(three.finish());

  if (const auto omega = setup.omega_bound()) {
    const FeasibleSet ball = FeasibleSet::unit_ball(region.dimension());
    Sampler b(setup, ball, opt, 7);
    Tracker om("omega_bound", opt);
    for (std::size_t i = 0; i < opt.samples; ++i) om.add(setup.d(b.point()) - 0.5 * *omega);
    report.checks.push_back(om.finish());
  }
  return report;
}

}  // namespace inexact
