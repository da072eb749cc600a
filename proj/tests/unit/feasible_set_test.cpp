#include "inexact/feasible_set.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "inexact/errors.hpp"
#include "inexact/rng.hpp"

namespace inexact {
namespace {

TEST(LinearMinimization, SimplexPicksSmallestCoefficient) {
  const auto q = FeasibleSet::simplex(3);
  const Point x = linear_minimization_oracle(q, Vector{{3.0, 1.0, 2.0}});
  EXPECT_EQ(x, (Vector{{0.0, 1.0, 0.0}}));
}

TEST(LinearMinimization, SimplexTieGoesToLowestIndex) {
  const auto q = FeasibleSet::simplex(3, 2.0);
  EXPECT_EQ(q.lmo(Vector{{1.0, 0.5, 0.5}}), (Vector{{0.0, 2.0, 0.0}}));
}

TEST(LinearMinimization, BallUsesCauchySchwarz) {
  const auto q = FeasibleSet::ball(Vector::Zero(2), 3.0);
  const Point x = q.lmo(Vector{{3.0, 4.0}});
  EXPECT_NEAR(x(0), -3.0 * 0.6, 1e-15);
  EXPECT_NEAR(x(1), -3.0 * 0.8, 1e-15);
}

TEST(LinearMinimization, ZeroDirectionOnBallReturnsCenter) {
  const Vector c{{1.0, -2.0}};
  EXPECT_EQ(FeasibleSet::ball(c, 0.5).lmo(Vector::Zero(2)), c);
}

TEST(LinearMinimization, UnboundedSetIsUnsupported) {
  try {
    FeasibleSet::unconstrained(2).lmo(Vector{{1.0, 0.0}});
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedSet);
  }
}

TEST(FeasibleSet, MembershipToleratesBoundaryRounding) {
  const auto s = FeasibleSet::simplex(2);
  EXPECT_TRUE(s.contains(Vector{{0.5, 0.5 + 1e-11}}));
  EXPECT_FALSE(s.contains(Vector{{0.5, 0.5 + 1e-8}}));
  const auto cap = FeasibleSet::capped_simplex(Vector::Constant(2, 0.8), 1.0);
  EXPECT_TRUE(cap.contains(Vector{{0.5, 0.5}}));
  EXPECT_FALSE(cap.contains(Vector{{0.8, 0.2}}));
}

TEST(FeasibleSet, ProjectionOntoSimplexMatchesThresholdSearch) {
  Rng rng(3, 0);
  const auto q = FeasibleSet::simplex(6, 1.5);
  for (int t = 0; t < 20; ++t) {
    const Vector y = 2.0 * rng.normal_vector(6);
    // Threshold tau with sum max(y - tau, 0) = 1.5, by bisection.
    double lo = y.minCoeff() - 2.0, hi = y.maxCoeff();
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((y.array() - mid).max(0.0).sum() > 1.5 ? lo : hi) = mid;
    }
    const Vector expected = (y.array() - 0.5 * (lo + hi)).max(0.0).matrix();
    EXPECT_LT((q.project(y) - expected).norm(), 1e-10);
  }
}

TEST(FeasibleSet, SamplesStayInside) {
  Rng rng(5, 0);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet::unit_ball(4), FeasibleSet::nonnegative_ball(3), FeasibleSet::simplex(5),
      FeasibleSet::capped_simplex(Vector::Constant(4, std::sqrt(3.0) / 2), 2.0),
      FeasibleSet::product({FeasibleSet::unit_ball(2), FeasibleSet::nonnegative_ball(2)})};
  for (const auto& s : sets)
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(s.contains(s.sample(rng))) << s.describe();
}

TEST(FeasibleSet, SupportFunctionAgreesWithLmo) {
  Rng rng(9, 0);
  const auto prod = FeasibleSet::product({FeasibleSet::unit_ball(3), FeasibleSet::simplex(2)});
  for (int i = 0; i < 20; ++i) {
    const Vector g = rng.normal_vector(5);
    EXPECT_NEAR(prod.support(g), g.dot(prod.lmo(-g)), 1e-12);
    for (int s = 0; s < 50; ++s) EXPECT_LE(g.dot(prod.sample(rng)), prod.support(g) + 1e-12);
  }
}

TEST(FeasibleSet, DiameterBounds) {
  EXPECT_DOUBLE_EQ(FeasibleSet::ball(Vector::Zero(3), 2.0).diameter_sq(), 16.0);
  EXPECT_DOUBLE_EQ(FeasibleSet::simplex(4).diameter_sq(), 2.0);
}

}  // namespace
}  // namespace inexact
