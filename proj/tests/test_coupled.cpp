#include "pdsplit/coupled.hpp"
#include "pdsplit/errors.hpp"
#include "pdsplit/harness/problems.hpp"
#include "pdsplit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pdsplit {
namespace {

BlockVector s(double v) { return BlockVector::scalar(v); }
double val(const BlockVector& b) { return b.block(0)[0]; }

MonotoneOp affine1(double m, double c) {
  Matrix M(1, 1);
  M << m;
  Vector cv(1);
  cv << c;
  return prox::affine(M, cv);
}

LinearMapGrid identity_grid() { return {{LinearMap::identity(Shape{1})}}; }

TEST(ReduceToPd, TrivialCouplingMatchesUnderlyingProblem) {
  const MonotoneOp A = prox::squared_l2(Shape{1});
  const MonotoneOp B = prox::l1_norm(Shape{1});
  const CoupledProblem cp({A}, {B}, {s(0)}, {s(0)}, identity_grid(), true);
  const PDProblem red = reduce_to_pd(cp);
  const PDProblem direct(A, B, LinearMap::identity(Shape{1}));
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const BlockVector w = rng.normal_block_vector(Shape{1});
    EXPECT_EQ(red.A().resolvent(0.8, w), direct.A().resolvent(0.8, w));
    EXPECT_EQ(red.B().resolvent(0.8, w), direct.B().resolvent(0.8, w));
    EXPECT_EQ(red.L().apply(w), w);
  }
}

TEST(ReduceToPd, ShiftedZeroOperator) {
  const CoupledProblem cp({prox::zero(Shape{1})}, {prox::zero(Shape{1})}, {s(5)}, {s(0)},
                          identity_grid());
  EXPECT_DOUBLE_EQ(val(reduce_to_pd(cp).A().resolvent(2.0, s(1))), 11.0);
}

TEST(ReduceToPd, ConsensusGridSumsBlocks) {
  LinearMapGrid grid{{LinearMap::identity(Shape{1}), LinearMap::identity(Shape{1})}};
  const CoupledProblem cp({prox::zero(Shape{1}), prox::zero(Shape{1})}, {prox::zero(Shape{1})},
                          {s(0), s(0)}, {s(0)}, grid);
  const PDProblem red = reduce_to_pd(cp);
  EXPECT_EQ(red.L().apply(BlockVector{{2}, {-5}}), (BlockVector{{-3}}));
  const LinearMap oracle = block_matrix_map(grid, 2, 1);
  EXPECT_EQ(red.L().apply_adjoint(s(4)), oracle.apply_adjoint(s(4)));
}

TEST(CoupledProblem, ShapeMismatchIsRejected) {
  EXPECT_THROW(CoupledProblem({prox::zero(Shape{2})}, {prox::zero(Shape{1})}, {s(0)}, {s(0)},
                              identity_grid()),
               ShapeError);
}

TEST(CoupledSolve, TrivialSystemMatchesPdTrajectoryExactly) {
  const MonotoneOp id = prox::squared_l2(Shape{1});
  const CoupledProblem cp({id}, {id}, {s(0)}, {s(0)}, identity_grid());
  const PDProblem prob(id, id, LinearMap::identity(Shape{1}));
  SolverConfig cfg;
  std::vector<PDPoint> a, b;
  cfg.observer = [&](const IterationEvent& ev) { a.push_back(ev.after); };
  const SolveReport r1 = coupled_solve(cp, CoupledPoint{{s(1)}, {s(0)}}, cfg);
  cfg.observer = [&](const IterationEvent& ev) { b.push_back(ev.after); };
  const SolveReport r2 = solve(prob, PDPoint{s(1), s(0)}, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(CoupledSolve, ConsensusMatchesDenseOracle) {
  // A1: x -> x - 3, A2: x -> x - 1, B: y -> y, L = [Id, Id].
  // KT system: x1 - 3 + (x1 + x2) = 0, x2 - 1 + (x1 + x2) = 0.
  Matrix K(2, 2);
  K << 2, 1, 1, 2;
  Vector rhs(2);
  rhs << 3, 1;
  const Vector x = K.partialPivLu().solve(rhs);  // (5/3, -1/3)
  LinearMapGrid grid{{LinearMap::identity(Shape{1}), LinearMap::identity(Shape{1})}};
  const CoupledProblem cp({affine1(1, -3), affine1(1, -1)}, {prox::squared_l2(Shape{1})},
                          {s(0), s(0)}, {s(0)}, grid, true);
  const SolveReport r = coupled_solve(cp, CoupledPoint::zeros(cp));
  ASSERT_TRUE(r.converged());
  const CoupledPoint sol = CoupledPoint::split(r.solution, cp);
  EXPECT_NEAR(val(sol.x[0]), x[0], 1e-6);
  EXPECT_NEAR(val(sol.x[1]), x[1], 1e-6);
  EXPECT_NEAR(val(sol.v[0]), x[0] + x[1], 1e-6);
  EXPECT_LE(coupled_kt_residuals(cp, sol).total, 1e-8);
}

TEST(CoupledSolve, StartAtOracleTerminates) {
  LinearMapGrid grid{{LinearMap::identity(Shape{1}), LinearMap::identity(Shape{1})}};
  const CoupledProblem cp({affine1(1, -3), affine1(1, -1)}, {prox::squared_l2(Shape{1})},
                          {s(0), s(0)}, {s(0)}, grid);
  const CoupledPoint kt{{s(5.0 / 3.0), s(-1.0 / 3.0)}, {s(4.0 / 3.0)}};
  const SolveReport r = coupled_solve(cp, kt);
  EXPECT_EQ(r.reason, StopReason::kTerminalBranch);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(CoupledResiduals, AgreeWithReducedResidual) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CoupledProblem cp = harness::random_coupled(seed);
    const PDProblem red = reduce_to_pd(cp);
    Rng rng(seed);
    const PDPoint p{rng.normal_block_vector(red.L().in_shape()),
                    rng.normal_block_vector(red.L().out_shape())};
    const double blockwise = coupled_kt_residuals(cp, CoupledPoint::split(p, cp)).total;
    EXPECT_NEAR(blockwise, kt_residual(p, red.A(), red.B(), red.L()), 1e-12 * (1.0 + blockwise));
  }
}

// Property: the blockwise iteration and the reduced iteration coincide.
TEST(CoupledProperties, ReductionEquivalenceOnRandomSystems) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const CoupledProblem cp = harness::random_coupled(seed);
    const PDProblem red = reduce_to_pd(cp);
    Rng rng(seed);
    const PDPoint init{rng.normal_block_vector(red.L().in_shape()),
                       rng.normal_block_vector(red.L().out_shape())};
    SolverConfig cfg;
    cfg.gamma = constant_schedule(0.5);
    cfg.mu = constant_schedule(2.0);
    cfg.max_iters = 100;
    cfg.residual_tol = 0.0;
    std::vector<PDPoint> a, b;
    cfg.observer = [&](const IterationEvent& ev) { a.push_back(ev.after); };
    coupled_solve(cp, CoupledPoint::split(init, cp), cfg);
    cfg.observer = [&](const IterationEvent& ev) { b.push_back(ev.after); };
    solve(red, init, cfg);
    ASSERT_EQ(a.size(), b.size()) << "seed " << seed;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const Vector d = (a[n].x.flatten() - b[n].x.flatten()).cwiseAbs();
      const Vector e = (a[n].v.flatten() - b[n].v.flatten()).cwiseAbs();
      ASSERT_LE(std::max(d.maxCoeff(), e.maxCoeff()), 1e-12) << "seed " << seed << " n " << n;
    }
  }
}

TEST(SolveMin, QuadraticsHaveMinimizerAtOrigin) {
  const CoupledPoint init{{BlockVector{{1, -2}}}, {BlockVector{{0.5, 0.5}}}};
  const MinProblem mp({functions::squared_l2(Shape{2})}, {functions::squared_l2(Shape{2})},
                      {BlockVector(Shape{2})}, {BlockVector(Shape{2})},
                      {{LinearMap::identity(Shape{2})}});
  SolverConfig cfg;
  cfg.residual_tol = 1e-10;
  const SolveReport r = solve_min(mp, init, cfg);
  ASSERT_TRUE(r.converged());
  EXPECT_LE(norm(r.solution.x), 1e-8);
  ASSERT_EQ(r.objective.size(), r.trace.size() + 1);
  EXPECT_LE(r.objective.back(), r.objective.front());
}

TEST(SolveMin, TiltedQuadratic) {
  // minimize x^2/2 - 2x.
  const MinProblem mp({functions::squared_l2(Shape{1})}, {functions::zero(Shape{1})}, {s(2)},
                      {s(0)}, identity_grid());
  const SolveReport r = solve_min(mp, CoupledPoint{{s(0)}, {s(0)}});
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(val(r.solution.x), 2.0, 1e-7);
  EXPECT_NEAR(r.objective.back(), -2.0, 1e-12);
}

TEST(SolveMin, BoxConstrainedLeastSquares) {
  // minimize 1/2 (x - 3)^2 over [-1, 1]: x = 1 (g translated by r = 3).
  const MinProblem mp({functions::box_indicator(Shape{1}, -1, 1)},
                      {functions::squared_l2(Shape{1})}, {s(0)}, {s(3)}, identity_grid());
  const SolveReport r = solve_min(mp, CoupledPoint{{s(0)}, {s(0)}});
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(val(r.solution.x), 1.0, 1e-7);
}

TEST(SolveMin, ObjectiveNeedsEvaluators) {
  ProxFunction f{prox::squared_l2(Shape{1}), {}};
  const MinProblem mp({f}, {functions::zero(Shape{1})}, {s(0)}, {s(0)}, identity_grid());
  EXPECT_FALSE(mp.has_objective());
  EXPECT_THROW(mp.objective({s(1)}), ParameterError);
  EXPECT_TRUE(solve_min(mp, CoupledPoint{{s(1)}, {s(0)}}).objective.empty());
}

}  // namespace
}  // namespace pdsplit
