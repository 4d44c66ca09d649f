#include "pdsplit/coupled.hpp"
#include "pdsplit/harness/problems.hpp"
#include "pdsplit/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pdsplit;

harness::Instance affine_instance(Index n) {
  harness::ProblemSpec spec;
  spec.dims = {n, n};
  spec.seed = 1;
  return harness::generate(spec);
}

void BM_PdStep(benchmark::State& state) {
  const auto inst = affine_instance(state.range(0));
  PDPoint p = inst.zero_point();
  for (auto _ : state) {
    StepResult r = pd_step(p, inst.pd(), 1.0, 1.0, 1.8);
    if (!r.terminated) p = std::move(r.next);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PdStep)->RangeMultiplier(4)->Range(4, 256);

void BM_SolveAffine(benchmark::State& state) {
  const auto inst = affine_instance(state.range(0));
  SolverConfig cfg;
  cfg.lambda = constant_schedule(1.8);
  cfg.residual_tol = 1e-8;
  cfg.max_iters = 100'000;
  std::size_t iterations = 0;
  for (auto _ : state) {
    const SolveReport r = solve(inst.pd(), inst.zero_point(), cfg);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.kt_res);
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveAffine)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CoupledSolve(benchmark::State& state) {
  const CoupledProblem cp = harness::random_coupled(static_cast<std::uint64_t>(state.range(0)));
  SolverConfig cfg;
  cfg.max_iters = 2'000;
  cfg.residual_tol = 1e-8;
  for (auto _ : state) {
    const SolveReport r = coupled_solve(cp, CoupledPoint::zeros(cp), cfg);
    benchmark::DoNotOptimize(r.kt_res);
  }
}
BENCHMARK(BM_CoupledSolve)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
