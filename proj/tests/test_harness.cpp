#include "pdsplit/errors.hpp"
#include "pdsplit/harness/problems.hpp"
#include "pdsplit/rng.hpp"
#include "pdsplit/harness/trace.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace pdsplit::harness {
namespace {

ProblemSpec spec_of(ProblemKind kind, std::vector<Index> dims, std::uint64_t seed) {
  ProblemSpec s;
  s.kind = kind;
  s.dims = std::move(dims);
  s.seed = seed;
  return s;
}

TEST(ProblemKind, NamesRoundTrip) {
  for (auto k : {ProblemKind::kAffinePd, ProblemKind::kLasso, ProblemKind::kConsensus,
                 ProblemKind::kSumTwo, ProblemKind::kNormfreeStress}) {
    EXPECT_EQ(parse_problem_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_problem_kind("nope"), ParameterError);
}

TEST(Generate, AffineScalarOracleSolvesTheLinearSystem) {
  const Instance inst = generate(spec_of(ProblemKind::kAffinePd, {1, 1}, 4));
  const AffineData& d = *inst.affine();
  const PDPoint& z = *inst.oracle();
  // Back-substitution into (P + L^T Q L) x = -c - L^T d and v = Q L x + d.
  const Vector x = z.x.flatten();
  const Vector lhs = (d.P + d.L.transpose() * d.Q * d.L) * x;
  const Vector rhs = -d.c - d.L.transpose() * d.d;
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
  EXPECT_LT((z.v.flatten() - (d.Q * d.L * x + d.d)).norm(), 1e-12);
}

TEST(Generate, EveryOracleSatisfiesItsSelfCheck) {
  const std::vector<ProblemSpec> specs{
      spec_of(ProblemKind::kAffinePd, {5, 3}, 1),  spec_of(ProblemKind::kSumTwo, {4}, 2),
      spec_of(ProblemKind::kConsensus, {2, 2, 2}, 3), spec_of(ProblemKind::kLasso, {8, 4}, 4),
      spec_of(ProblemKind::kNormfreeStress, {6, 5}, 5)};
  for (const auto& s : specs) {
    const Instance inst = generate(s);
    ASSERT_TRUE(inst.oracle().has_value());
    EXPECT_LE(inst.kt_residual(*inst.oracle()), 1e-10) << to_string(s.kind);
  }
}

TEST(Generate, NormScaleIsHonoured) {
  for (double scale : {1e-2, 1.0, 50.0}) {
    ProblemSpec s = spec_of(ProblemKind::kNormfreeStress, {6, 5}, 7);
    s.norm_scale = scale;
    const Instance inst = generate(s);
    const Eigen::JacobiSVD<Matrix> svd(inst.affine()->L);
    EXPECT_NEAR(svd.singularValues()[0], scale, 1e-12 * scale);
  }
}

TEST(Generate, IsDeterministic) {
  for (auto kind : {ProblemKind::kAffinePd, ProblemKind::kLasso, ProblemKind::kConsensus}) {
    const ProblemSpec s = spec_of(kind, kind == ProblemKind::kConsensus
                                            ? std::vector<Index>{3, 3}
                                            : std::vector<Index>{6, 4},
                                  11);
    const Instance a = generate(s), b = generate(s);
    EXPECT_EQ(*a.oracle(), *b.oracle());
    Rng rng(1);
    const PDPoint p{rng.normal_block_vector(a.pd().L().in_shape()),
                    rng.normal_block_vector(a.pd().L().out_shape())};
    EXPECT_EQ(a.pd().A().resolvent(0.3, p.x), b.pd().A().resolvent(0.3, p.x));
    EXPECT_EQ(a.pd().B().resolvent(0.3, p.v), b.pd().B().resolvent(0.3, p.v));
    EXPECT_EQ(a.pd().L().apply(p.x), b.pd().L().apply(p.x));
  }
  EXPECT_NE(*generate(spec_of(ProblemKind::kAffinePd, {3}, 1)).oracle(),
            *generate(spec_of(ProblemKind::kAffinePd, {3}, 2)).oracle());
}

TEST(Generate, LassoWithoutRegularizationIsLeastSquares) {
  ProblemSpec s = spec_of(ProblemKind::kLasso, {3, 6}, 5);
  s.lambda_reg = 0.0;
  const Instance inst = generate(s);
  const MinProblem& mp = *inst.min_problem();
  const LinearMap& M = *mp.coupled().grid()[0][0];
  Matrix Md(6, 3);
  for (Index j = 0; j < 3; ++j) {
    Vector e = Vector::Zero(3);
    e[j] = 1.0;
    Md.col(j) = M.apply(BlockVector::single(e)).flatten();
  }
  const Vector y = mp.coupled().r()[0].flatten();
  const Vector ls = (Md.transpose() * Md).ldlt().solve(Md.transpose() * y);
  EXPECT_LT((inst.oracle()->x.flatten() - ls).norm(), 1e-8);
}

TEST(Generate, IdenticalConsensusBlocksGiveEqualOracleBlocks) {
  ProblemSpec s = spec_of(ProblemKind::kConsensus, {2, 2, 2}, 8);
  s.identical_blocks = true;
  const Instance inst = generate(s);
  const BlockVector& x = inst.oracle()->x;
  ASSERT_EQ(x.num_blocks(), 3u);
  EXPECT_LT((x.block(0) - x.block(1)).norm(), 1e-12);
  EXPECT_LT((x.block(0) - x.block(2)).norm(), 1e-12);
}

TEST(Generate, InvalidDimsAreRejected) {
  EXPECT_THROW(generate(spec_of(ProblemKind::kAffinePd, {}, 1)), ParameterError);
  EXPECT_THROW(generate(spec_of(ProblemKind::kAffinePd, {0}, 1)), ParameterError);
  EXPECT_THROW(generate(spec_of(ProblemKind::kConsensus, {2, 3}, 1)), ParameterError);
}

TEST(Ista, MatchesScalarSoftThreshold) {
  // 1-D: minimize lambda |x| + (m x - y)^2 / 2 -> x = soft(m y, lambda) / m^2.
  Matrix M(1, 1);
  M << 2;
  Vector y(1);
  y << 3;
  const IstaResult r = ista_lasso(M, y, 0.5);
  EXPECT_NEAR(r.x[0], (6.0 - 0.5) / 4.0, 1e-9);
  EXPECT_NEAR(r.objective, lasso_objective(M, y, 0.5, r.x), 0.0);
}

TEST(Instance, SolveReachesOracleForEveryKind) {
  const std::vector<ProblemSpec> specs{
      spec_of(ProblemKind::kAffinePd, {4}, 7), spec_of(ProblemKind::kSumTwo, {3}, 2),
      spec_of(ProblemKind::kConsensus, {2, 2}, 3), spec_of(ProblemKind::kLasso, {8, 4}, 3)};
  for (const auto& s : specs) {
    const Instance inst = generate(s);
    const SolveReport r = inst.solve(inst.zero_point(), SolverConfig{});
    ASSERT_TRUE(r.converged()) << to_string(s.kind);
    EXPECT_LE(norm(r.solution - *inst.oracle()), 1e-6) << to_string(s.kind);
  }
}

TEST(Trace, RoundTripIsExact) {
  std::vector<TraceRecord> recs(3);
  recs[0] = {0, 2.5448348127232707, 1.0 / 3.0, 0.1, 1e-300, 5e-324, 0.48, 0.88, 15500};
  recs[1] = {1, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-17, std::nullopt, 7};
  recs[2] = {2, 1e300, 3.0, -0.0, 2.0, 4.0, 1e-9, 1e-8, -1};
  std::stringstream ss;
  write_trace_csv(ss, recs);
  EXPECT_EQ(read_trace_csv(ss), recs);
}

TEST(Trace, HeaderIsBitExact) {
  std::stringstream ss;
  write_trace_csv(ss, {});
  EXPECT_EQ(ss.str(), "n,tau,theta,delta,s_norm,t_norm,kt_res,dist_to_oracle,wall_ns\n");
}

TEST(Trace, MalformedInputIsRejected) {
  std::stringstream bad_header("n,tau\n");
  EXPECT_THROW(read_trace_csv(bad_header), std::runtime_error);
  std::stringstream bad_row(std::string(kTraceHeader) + "\n0,1,2,3\n");
  EXPECT_THROW(read_trace_csv(bad_row), std::runtime_error);
  std::stringstream bad_num(std::string(kTraceHeader) + "\n0,x,2,3,4,5,6,,7\n");
  EXPECT_THROW(read_trace_csv(bad_num), std::runtime_error);
}

TEST(Trace, ObserverRecordsEveryIteration) {
  const Instance inst = generate(spec_of(ProblemKind::kAffinePd, {3}, 1));
  std::vector<TraceRecord> recs;
  SolverConfig cfg;
  cfg.observer = trace_observer(recs, inst.oracle());
  const SolveReport r = inst.solve(inst.zero_point(), cfg);
  ASSERT_EQ(recs.size(), r.trace.size());
  for (std::size_t n = 0; n < recs.size(); ++n) {
    EXPECT_EQ(recs[n].n, n);
    EXPECT_EQ(recs[n].tau, r.trace[n].diag.tau);
    ASSERT_TRUE(recs[n].dist_to_oracle.has_value());
  }
  EXPECT_NEAR(*recs.back().dist_to_oracle, norm(r.solution - *inst.oracle()), 1e-15);
}

}  // namespace
}  // namespace pdsplit::harness
