#include "inexact/prox.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "inexact/errors.hpp"
#include "inexact/rng.hpp"
#include "inexact/validate.hpp"

namespace inexact {
namespace {

struct SetupCase {
  SetupPtr setup;
  FeasibleSet region;
};

std::vector<SetupCase> all_setups() {
  return {
      {euclidean_setup(), FeasibleSet::unit_ball(4)},
      {entropy_setup(), FeasibleSet::simplex(5)},
      {log_barrier_setup(), FeasibleSet::simplex(5)},
      {inverse_gap_setup(), FeasibleSet::capped_simplex(Vector::Constant(5, std::sqrt(3.0) / 2), 2.5)},
      {quartic_setup(), FeasibleSet::unit_ball(4)},
      {scaled_setup(euclidean_setup(), Vector{{0.2, -0.1, 0.0, 0.3}}, 0.5), FeasibleSet::unit_ball(4)},
      {product_setup({{euclidean_setup(), 3}, {entropy_setup(), 3}}),
       FeasibleSet::product({FeasibleSet::unit_ball(3), FeasibleSet::simplex(3)})},
  };
}

TEST(Bregman, EuclideanIsHalfSquaredDistance) {
  EXPECT_DOUBLE_EQ(bregman(*euclidean_setup(), Vector{{0.0, 0.0}}, Vector{{3.0, 4.0}}), 12.5);
}

TEST(Bregman, EntropyVanishesOnDiagonal) {
  const Vector x{{0.5, 0.5}};
  EXPECT_EQ(bregman(*entropy_setup(), x, x), 0.0);
}

TEST(Bregman, InverseGapOneDimensional) {
  EXPECT_NEAR(bregman(*inverse_gap_setup(), Vector{{0.5}}, Vector{{0.25}}), 1.0 / 3.0, 1e-15);
}

TEST(Bregman, BoundaryAnchorIsDomainError) {
  try {
    bregman(*entropy_setup(), Vector{{0.0, 1.0}}, Vector{{0.5, 0.5}});
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainError);
  }
}

TEST(ProxSetup, GradientMatchesCentralDifferences) {
  for (const auto& c : all_setups()) {
    Rng rng(1, 0);
    for (int t = 0; t < 100; ++t) {
      const Point x = c.setup->clamp_interior(c.region.sample(rng));
      const Vector g = c.setup->grad_d(x);
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Point p = x, m = x;
        p(i) += h;
        m(i) -= h;
        if (!c.setup->in_domain_interior(m) || !c.setup->in_domain_interior(p)) continue;
        const double fd = (c.setup->d(p) - c.setup->d(m)) / (2 * h);
        EXPECT_NEAR(fd, g(i), 1e-5 * std::max(1.0, std::abs(g(i)))) << c.setup->name();
      }
    }
  }
}

TEST(ProxSetup, DefinitionalChecksPass) {
  ValidationOptions opt;
  for (const auto& c : all_setups()) {
    const auto report = validate_setup(*c.setup, c.region, opt);
    for (const auto& r : report.checks) EXPECT_TRUE(r.passed) << c.setup->name() << " " << r.name;
  }
}

TEST(MirrorStep, EntropyIsMultiplicativeWeights) {
  Rng rng(2, 0);
  const auto q = FeasibleSet::simplex(5);
  const Point y = q.sample(rng);
  const Vector g = rng.normal_vector(5);
  const double beta = 0.7;
  // argmin <g, x> + beta V[y](x) = argmin beta d(x) - <beta grad d(y) - g, x>.
  const Vector shift = beta * entropy_setup()->grad_d(y) - g;
  const Point x = entropy_setup()->mirror_step(q, beta, shift);
  Vector expected = y.array() * (-g.array() / beta).exp();
  expected /= expected.sum();
  EXPECT_LT((x - expected).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(MirrorStep, LogBarrierSolvesKkt) {
  Rng rng(4, 0);
  const auto q = FeasibleSet::simplex(6);
  const Vector shift = rng.normal_vector(6);
  const double beta = 0.3;
  const Point x = log_barrier_setup()->mirror_step(q, beta, shift);
  // Stationarity: -beta / x_i - shift_i is the same for every i.
  const Vector r = (-beta * x.cwiseInverse() - shift);
  EXPECT_LT(r.maxCoeff() - r.minCoeff(), 1e-8 * r.cwiseAbs().maxCoeff());
  EXPECT_NEAR(x.sum(), 1.0, 1e-12);
  EXPECT_GT(x.minCoeff(), 0.0);
}

TEST(MirrorStep, InverseGapRespectsCapsAndKkt) {
  const double cap = std::sqrt(3.0) / 2;
  const auto q = FeasibleSet::capped_simplex(Vector::Constant(4, cap), 2.0);
  const Vector shift{{3.0, 0.0, -1.0, 0.5}};
  const double beta = 0.2;
  const Point x = inverse_gap_setup()->mirror_step(q, beta, shift);
  EXPECT_NEAR(x.sum(), 2.0, 1e-10);
  // Interior coordinates share the multiplier beta / (1 - x)^2 - shift.
  std::vector<double> mult;
  for (int i = 0; i < 4; ++i) {
    EXPECT_GE(x(i), 0.0);
    EXPECT_LE(x(i), cap);
    if (x(i) > 1e-9 && x(i) < cap - 1e-9) mult.push_back(beta / ((1 - x(i)) * (1 - x(i))) - shift(i));
  }
  ASSERT_GE(mult.size(), 2u);
  for (double v : mult) EXPECT_NEAR(v, mult.front(), 1e-7);
}

TEST(MirrorStep, QuarticFirstOrderCondition) {
  const Vector shift{{2.0, -1.0, 0.5}};
  const double beta = 1.5;
  const Point x = quartic_setup()->mirror_step(FeasibleSet::unconstrained(3), beta, shift);
  EXPECT_LT((beta * quartic_setup()->grad_d(x) - shift).norm(), 1e-12);
  const Point xb = quartic_setup()->mirror_step(FeasibleSet::unit_ball(3), beta, 10 * shift);
  EXPECT_NEAR(xb.norm(), 1.0, 1e-12);
}

TEST(MirrorStep, ScaledSetupIsRecenteredStep) {
  const Vector c{{0.1, 0.2}};
  const auto s = scaled_setup(euclidean_setup(), c, 2.0);
  // d_p(x) = 1/2 ||x - c||^2, so argmin beta d_p - <shift, x> = c + shift / beta.
  const Point x = s->mirror_step(FeasibleSet::unconstrained(2), 4.0, Vector{{0.4, -0.8}});
  EXPECT_LT((x - (c + Vector{{0.1, -0.2}})).norm(), 1e-15);
  EXPECT_EQ(s->prox_center(FeasibleSet::unit_ball(2)), c);
}

TEST(ProxSetup, OmegaOnlyWhereKnown) {
  EXPECT_EQ(euclidean_setup()->omega_bound(), 1.0);
  EXPECT_FALSE(entropy_setup()->omega_bound().has_value());
}

}  // namespace
}  // namespace inexact
