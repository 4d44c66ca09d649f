#include "pdsplit/errors.hpp"
#include "pdsplit/halfspace.hpp"
#include "pdsplit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pdsplit {
namespace {

BlockVector s(double v) { return BlockVector::scalar(v); }
double val(const BlockVector& b) { return b.block(0)[0]; }
PDPoint pt(double x, double v) { return {s(x), s(v)}; }

TEST(BuildHalfspace, AllZeroGraphPoints) {
  const GraphPoint a{s(0), s(0)}, b{s(0), s(0)};
  const HalfSpaceCert h = build_halfspace(a, b, LinearMap::scaled_identity(Shape{1}, 3.0));
  EXPECT_EQ(val(h.s_primal), 0.0);
  EXPECT_EQ(val(h.s_dual), 0.0);
  EXPECT_EQ(h.eta, 0.0);
  EXPECT_EQ(h.sigma(), 0.0);
}

TEST(BuildHalfspace, HandEvaluation) {
  // L = 2, a = 1, a* = 3, b = 1, b* = 2.
  const HalfSpaceCert h =
      build_halfspace({s(1), s(3)}, {s(1), s(2)}, LinearMap::scaled_identity(Shape{1}, 2.0));
  EXPECT_DOUBLE_EQ(val(h.s_primal), 7.0);
  EXPECT_DOUBLE_EQ(val(h.s_dual), -1.0);
  EXPECT_DOUBLE_EQ(h.eta, 5.0);
}

TEST(BuildHalfspace, KuhnTuckerConsistentPointsGiveTheWholeSpace) {
  // a* = -L* b*, b = L a.
  const LinearMap L = LinearMap::scaled_identity(Shape{1}, -1.5);
  const double a = 0.8, bs = 0.6;
  const HalfSpaceCert h = build_halfspace({s(a), s(1.5 * bs)}, {s(-1.5 * a), s(bs)}, L);
  EXPECT_DOUBLE_EQ(h.sigma(), 0.0);
  EXPECT_NEAR(h.eta, 0.0, 1e-15);
}

HalfSpaceCert cert(double s1, double s2, double eta) { return {s(s1), s(s2), eta}; }

TEST(ProjectHalfspace, FeasiblePointIsUnchanged) {
  const Projection p = project_halfspace(pt(0, 0), cert(1, 1, 2));
  EXPECT_EQ(p.point, pt(0, 0));
  EXPECT_EQ(p.delta, 0.0);
}

TEST(ProjectHalfspace, LagrangeOracle) {
  const Projection p = project_halfspace(pt(2, 2), cert(1, 1, 0));
  EXPECT_NEAR(val(p.point.x), 0.0, 1e-15);
  EXPECT_NEAR(val(p.point.v), 0.0, 1e-15);
  EXPECT_NEAR(p.delta, 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(ProjectHalfspace, DegenerateHalfspaceIsEverything) {
  const Projection p = project_halfspace(pt(-3, 9), cert(0, 0, 0));
  EXPECT_EQ(p.point, pt(-3, 9));
  EXPECT_EQ(p.delta, 0.0);
}

TEST(RelaxedStep, ApproachesReflectionAsLambdaTendsToTwo) {
  // lambda = 2 itself is outside ]0,2[; the reflection of (2,2) through
  // <q, (1,1)> = 0 is (-2,-2), and p + lambda (P p - p) = (2 - 2 lambda)(1,1).
  EXPECT_THROW(relaxed_step(pt(2, 2), cert(1, 1, 0), 2.0), ParameterError);
  const double lambda = 2.0 - 1e-9;
  const PDPoint q = relaxed_step(pt(2, 2), cert(1, 1, 0), lambda);
  EXPECT_NEAR(val(q.x), 2.0 - 2.0 * lambda, 1e-14);
  EXPECT_NEAR(val(q.v), -2.0, 1e-8);
}

TEST(RelaxedStep, FeasiblePointIsFixed) {
  for (double lambda : {0.1, 1.0, 1.9}) {
    EXPECT_EQ(relaxed_step(pt(0.5, -1), cert(1, 1, 2), lambda), pt(0.5, -1));
  }
}

TEST(RelaxedStep, LambdaOutsideOpenIntervalIsRejected) {
  EXPECT_THROW(relaxed_step(pt(0, 0), cert(1, 1, 0), 0.0), ParameterError);
  EXPECT_THROW(relaxed_step(pt(0, 0), cert(1, 1, 0), 2.0 + 1e-12), ParameterError);
}

TEST(KtResidual, HandValues) {
  const MonotoneOp id = prox::squared_l2(Shape{1});
  const LinearMap L = LinearMap::identity(Shape{1});
  EXPECT_EQ(kt_residual(pt(0, 0), id, id, L), 0.0);
  EXPECT_NEAR(kt_residual(pt(1, 0), id, id, L), std::sqrt(0.5), 1e-15);
  const MonotoneOp zero = prox::zero(Shape{1});
  EXPECT_EQ(kt_residual(pt(4.2, 0), zero, zero, LinearMap::scaled_identity(Shape{1}, 3.0)), 0.0);
}

// Property: relaxed steps never move away from points of the half-space,
// and points violating it are strictly separated.
TEST(HalfspaceProperties, RelaxedStepIsFejerForFeasiblePoints) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Shape sx{3}, sv{2};
    HalfSpaceCert h{rng.normal_block_vector(sx), rng.normal_block_vector(sv), rng.normal()};
    PDPoint z{rng.normal_block_vector(sx), rng.normal_block_vector(sv)};
    const double viol = h.violation(z);
    if (viol > 0.0) {
      const double c = 2.0 * viol / (h.sigma() * h.sigma());
      z.x.axpy(-c, h.s_primal);
      z.v.axpy(-c, h.s_dual);
    }
    const PDPoint p{3.0 * rng.normal_block_vector(sx), 3.0 * rng.normal_block_vector(sv)};
    for (double lambda : {0.1, 1.0, 1.9}) {
      const PDPoint q = relaxed_step(p, h, lambda);
      EXPECT_LE(norm(q - z), norm(p - z) + 1e-9);
    }
    const Projection proj = project_halfspace(p, h);
    EXPECT_LE(h.violation(proj.point), 1e-12 * (1.0 + norm(p)) * (1.0 + h.sigma()));
    EXPECT_NEAR(proj.delta, std::max(0.0, h.violation(p)) / h.sigma(), 1e-12 * (1.0 + norm(p)));
  }
}

}  // namespace
}  // namespace pdsplit
