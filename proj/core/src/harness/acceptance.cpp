#include "pdsplit/harness/acceptance.hpp"

#include "pdsplit/coupled.hpp"
#include "pdsplit/halfspace.hpp"
#include "pdsplit/harness/problems.hpp"
#include "pdsplit/linear_map.hpp"
#include "pdsplit/monotone.hpp"
#include "pdsplit/rng.hpp"
#include "pdsplit/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace pdsplit::harness {

// The solver must never see ||L||: a map exposes only apply/apply_adjoint.
template <typename T>
concept ExposesNorm = requires(const T& t) { t.norm(); } || requires(const T& t) { t.op_norm(); } ||
                      requires(const T& t) { t.spectral_norm(); } ||
                      requires(const T& t) { t.norm_bound(); };
static_assert(!ExposesNorm<LinearMap>, "LinearMap must not expose an operator norm");
static_assert(!ExposesNorm<PDProblem>, "PDProblem must not expose an operator norm");

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CriterionResult criterion(std::string id, std::string description) {
  CriterionResult r;
  r.id = std::move(id);
  r.description = std::move(description);
  return r;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

ProblemSpec affine_spec(std::uint64_t s) {
  ProblemSpec spec;
  spec.kind = ProblemKind::kAffinePd;
  spec.seed = s;
  spec.dims = {static_cast<Index>(1 + s % 8), static_cast<Index>(1 + (3 * s) % 8)};
  return spec;
}

constexpr int kAffineInstances = 20;

SolverConfig base_config() {
  SolverConfig cfg;
  cfg.gamma = constant_schedule(1.0);
  cfg.mu = constant_schedule(1.0);
  cfg.lambda = constant_schedule(1.8);
  cfg.max_iters = 100000;
  return cfg;
}

// Tracks the identity check and the tail statistics over every run.
struct RunMonitor {
  double identity_defect = 0.0;
  std::size_t identity_steps = 0;
  std::size_t runs = 0;

  double tail_worst = 0.0;
  std::size_t tail_runs = 0;
  std::string tail_worst_run;
  std::vector<std::string> tail_failures;

  Observer observe(const LinearMap& L, Observer next = {}) {
    return [this, &L, next = std::move(next)](const IterationEvent& ev) {
      const SelectionTerms st = selection_terms(ev.before, ev.a, ev.b, L);
      identity_defect = std::max(identity_defect, std::abs(st.lhs - ev.diag.numerator));
      ++identity_steps;
      if (next) next(ev);
    };
  }

  void finish(const SolveReport& report, const std::string& label) {
    ++runs;
    if (!report.converged() || report.trace.empty()) return;
    ++tail_runs;
    const std::size_t len = report.trace.size();
    const std::size_t tail = std::max<std::size_t>(1, (len + 19) / 20);
    double worst = 0.0;
    for (std::size_t i = len - tail; i < len; ++i) {
      const StepDiag& d = report.trace[i].diag;
      worst = std::max({worst, d.delta, std::sqrt(d.s_norm2), std::sqrt(d.t_norm2), d.x_gap});
    }
    if (!(worst < 1e-6)) tail_failures.push_back(label);
    if (worst >= tail_worst) {
      tail_worst = worst;
      tail_worst_run = label;
    }
  }
};

SolveReport monitored_solve(const Instance& inst, const PDPoint& init, SolverConfig cfg,
                            RunMonitor& mon, const std::string& label) {
  cfg.observer = mon.observe(inst.pd().L(), std::move(cfg.observer));
  SolveReport report = inst.solve(init, cfg);
  mon.finish(report, label);
  return report;
}

std::string instance_label(const ProblemSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.kind) << "(seed " << spec.seed << ", dims";
  for (Index d : spec.dims) os << ' ' << d;
  if (spec.kind == ProblemKind::kNormfreeStress) os << ", |L| " << spec.norm_scale;
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

CriterionResult ac1_fejer(RunMonitor& mon) {
  CriterionResult res = criterion("AC-1", "Fejer monotonicity w.r.t. the oracle on 20 affine_pd instances");
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  const auto t0 = Clock::now();
  for (int s = 1; s <= kAffineInstances; ++s) {
    const Instance inst = generate(affine_spec(static_cast<std::uint64_t>(s)));
    const PDPoint& z = *inst.oracle();
    SolverConfig cfg = base_config();
    cfg.observer = [&](const IterationEvent& ev) {
      worst = std::max(worst, norm(ev.after - z) - norm(ev.before - z));
      ++steps;
    };
    monitored_solve(inst, inst.zero_point(), cfg, mon, instance_label(inst.spec()));
  }
  res.seconds = seconds_since(t0);
  res.passed = worst <= 1e-9 && res.seconds < 5.0;
  res.detail = "max increase " + sci(worst) + " (limit 1e-9) over " + std::to_string(steps) +
               " steps";
  return res;
}

CriterionResult ac2_convergence(RunMonitor& mon) {
  CriterionResult res = criterion("AC-2", "affine_pd runs reach the oracle at gamma=mu=1, lambda=1.8");
  double worst_kt = 0.0, worst_dist = 0.0;
  std::size_t max_iters = 0;
  int failures = 0;
  const auto t0 = Clock::now();
  for (int s = 1; s <= kAffineInstances; ++s) {
    const Instance inst = generate(affine_spec(static_cast<std::uint64_t>(s)));
    const SolveReport r =
        monitored_solve(inst, inst.zero_point(), base_config(), mon, instance_label(inst.spec()));
    const double dist = norm(r.solution - *inst.oracle());
    worst_kt = std::max(worst_kt, r.kt_res);
    worst_dist = std::max(worst_dist, dist);
    max_iters = std::max(max_iters, r.iterations);
    if (!r.converged() || r.kt_res > 1e-8 || dist > 1e-6) ++failures;
  }
  res.seconds = seconds_since(t0);
  res.passed = failures == 0 && res.seconds < 10.0;
  res.detail = "kt " + sci(worst_kt) + " (limit 1e-8), dist " + sci(worst_dist) +
               " (limit 1e-6), max iterations " + std::to_string(max_iters) + ", " +
               std::to_string(failures) + " failures";
  return res;
}

CriterionResult ac3_normfree(RunMonitor& mon) {
  CriterionResult res = criterion("AC-3", "AC-2 on normfree_stress, |L| in {1e-2,1,50} x gamma=mu in "
                              "{1e-2,1,1e2}, no norm in the API");
  double worst_kt = 0.0, worst_dist = 0.0;
  std::size_t max_iters = 0;
  int failures = 0, runs = 0;
  std::string failed;
  const auto t0 = Clock::now();
  for (double scale : {1e-2, 1.0, 50.0}) {
    for (double step : {1e-2, 1.0, 1e2}) {
      for (std::uint64_t seed : {11u, 12u}) {
        ProblemSpec spec;
        spec.kind = ProblemKind::kNormfreeStress;
        spec.seed = seed;
        spec.dims = {6, 5};
        spec.norm_scale = scale;
        const Instance inst = generate(spec);
        SolverConfig cfg = base_config();
        cfg.epsilon = 1e-3;
        cfg.gamma = constant_schedule(step);
        cfg.mu = constant_schedule(step);
        const SolveReport r = monitored_solve(inst, inst.zero_point(), cfg, mon,
                                              instance_label(spec) + "@" + sci(step));
        const double dist = norm(r.solution - *inst.oracle());
        worst_kt = std::max(worst_kt, r.kt_res);
        worst_dist = std::max(worst_dist, dist);
        max_iters = std::max(max_iters, r.iterations);
        ++runs;
        if (!r.converged() || r.kt_res > 1e-8 || dist > 1e-6) {
          ++failures;
          failed += " " + instance_label(spec) + "@" + sci(step) + "[" +
                    std::string(to_string(r.reason)) + ", kt " + sci(r.kt_res) + "]";
        }
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = failures == 0 && res.seconds < 10.0;
  res.detail = std::to_string(runs) + " runs, kt " + sci(worst_kt) + ", dist " + sci(worst_dist) +
               ", max iterations " + std::to_string(max_iters) + ", " +
               std::to_string(failures) + " failures" + failed;
  return res;
}

CriterionResult ac4_halfspace(RunMonitor& mon) {
  CriterionResult res = criterion("AC-4", "half-spaces contain the oracle; projections are optimal");
  double worst_contain = -std::numeric_limits<double>::infinity();
  double worst_opt = -std::numeric_limits<double>::infinity();
  std::size_t halfspaces = 0, sampled = 0;
  Rng rng(0xac4);
  const auto t0 = Clock::now();
  for (int s = 1; s <= kAffineInstances; ++s) {
    const Instance inst = generate(affine_spec(static_cast<std::uint64_t>(s)));
    const PDPoint& z = *inst.oracle();
    const LinearMap& L = inst.pd().L();
    SolverConfig cfg = base_config();
    cfg.observer = [&](const IterationEvent& ev) {
      const HalfSpaceCert h = build_halfspace(ev.a, ev.b, L);
      worst_contain = std::max(worst_contain, h.violation(z));
      ++halfspaces;
      const double sigma = h.sigma();
      if (ev.n % 3 != 0 || !(sigma > 0.0)) return;
      ++sampled;
      const PDPoint& p = ev.before;
      const Projection proj = project_halfspace(p, h);
      const PDPoint pp = proj.point;
      const PDPoint shift = p - pp;
      const double dist_p = norm(shift);
      worst_opt = std::max(worst_opt, h.violation(pp));
      const double spread = 1.0 + norm(p);
      for (int j = 0; j < 100; ++j) {
        PDPoint q{pp.x + spread * rng.normal_block_vector(pp.x.shape()),
                  pp.v + spread * rng.normal_block_vector(pp.v.shape())};
        const double viol = h.violation(q);
        if (viol > 0.0) {
          // Reflect through the boundary so q is strictly feasible.
          const double c = 2.0 * viol / (sigma * sigma);
          q.x.axpy(-c, h.s_primal);
          q.v.axpy(-c, h.s_dual);
        }
        // Variational characterization and distance optimality.
        worst_opt = std::max(worst_opt, inner(shift, q - pp));
        worst_opt = std::max(worst_opt, dist_p - norm(p - q));
      }
    };
    monitored_solve(inst, inst.zero_point(), cfg, mon, instance_label(inst.spec()));
  }
  res.seconds = seconds_since(t0);
  res.passed = worst_contain <= 1e-9 && worst_opt <= 1e-9;
  res.detail = "containment " + sci(worst_contain) + " (limit 1e-9) over " +
               std::to_string(halfspaces) + " half-spaces, optimality " + sci(worst_opt) +
               " (limit 1e-9) over " + std::to_string(sampled) + " x 100 feasible points";
  return res;
}

CriterionResult ac6_reduction() {
  CriterionResult res = criterion("AC-6", "blockwise coupled iteration equals the reduced two-operator "
                              "iteration on 50 random systems");
  double worst = 0.0;
  std::size_t steps = 0;
  int mismatched_runs = 0;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CoupledProblem cp = random_coupled(seed);
    const PDProblem reduced = reduce_to_pd(cp);
    Rng rng(seed ^ 0xac6);
    const PDPoint init{rng.normal_block_vector(reduced.L().in_shape()),
                       rng.normal_block_vector(reduced.L().out_shape())};

    std::vector<PDPoint> direct, via;
    SolverConfig cfg = base_config();
    cfg.residual_tol = 0.0;
    cfg.max_iters = 200;
    cfg.observer = [&](const IterationEvent& ev) { direct.push_back(ev.after); };
    const SolveReport r1 = coupled_solve(cp, CoupledPoint::split(init, cp), cfg);
    cfg.observer = [&](const IterationEvent& ev) { via.push_back(ev.after); };
    const SolveReport r2 = solve(reduced, init, cfg);

    if (direct.size() != via.size() || r1.reason != r2.reason) {
      ++mismatched_runs;
      continue;
    }
    for (std::size_t n = 0; n < direct.size(); ++n) {
      const Vector dx = direct[n].x.flatten() - via[n].x.flatten();
      const Vector dv = direct[n].v.flatten() - via[n].v.flatten();
      double d = 0.0;
      if (dx.size() > 0) d = std::max(d, dx.cwiseAbs().maxCoeff());
      if (dv.size() > 0) d = std::max(d, dv.cwiseAbs().maxCoeff());
      worst = std::max(worst, d);
      ++steps;
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = mismatched_runs == 0 && worst <= 1e-12 && res.seconds < 10.0;
  res.detail = "max coordinate difference " + sci(worst) + " (limit 1e-12) over " +
               std::to_string(steps) + " iterations, " + std::to_string(mismatched_runs) +
               " runs with different length";
  return res;
}

CriterionResult ac7_lasso(RunMonitor& mon) {
  CriterionResult res = criterion("AC-7", "lasso 8x4 (lambda 0.1) objective matches the ISTA oracle");
  double worst = 0.0;
  bool ok = true;
  const auto t0 = Clock::now();
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    ProblemSpec spec;
    spec.kind = ProblemKind::kLasso;
    spec.seed = seed;
    spec.dims = {8, 4};
    spec.lambda_reg = 0.1;
    const Instance inst = generate(spec);
    const SolveReport r = monitored_solve(inst, inst.zero_point(), base_config(), mon,
                                          instance_label(spec));
    if (r.objective.empty() || !inst.oracle_objective()) {
      ok = false;
      continue;
    }
    const double gap = std::abs(r.objective.back() - *inst.oracle_objective());
    worst = std::max(worst, gap);
    if (!r.converged() || gap > 1e-6) ok = false;
  }
  res.seconds = seconds_since(t0);
  res.passed = ok && res.seconds < 5.0;
  res.detail = "max |objective - oracle| " + sci(worst) + " (limit 1e-6) over 3 seeds";
  return res;
}

// Library operators with an independent membership test for (a, a*) in gra A.
struct LibraryOp {
  std::string name;
  MonotoneOp op;
  std::function<double(const BlockVector& a, const BlockVector& a_star)> graph_defect;
};

std::vector<LibraryOp> library_operators() {
  const Shape sh{4};
  Rng rng(0xac8);
  Matrix G = rng.normal_matrix(4, 4);
  Matrix S = rng.normal_matrix(4, 4);
  const Matrix M = G.transpose() * G / 4.0 + 0.1 * Matrix::Identity(4, 4) + 0.5 * (S - S.transpose());
  const Vector c = rng.normal_vector(4);
  const BlockVector zshift = rng.normal_block_vector(sh);
  const BlockVector rshift = rng.normal_block_vector(sh);

  auto flat_max = [](const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };
  auto l1_defect = [](double weight) {
    return [weight](const BlockVector& a, const BlockVector& g) {
      const Vector x = a.flatten(), y = g.flatten();
      double d = 0.0;
      for (Index j = 0; j < x.size(); ++j) {
        if (x[j] != 0.0) {
          d = std::max(d, std::abs(y[j] - std::copysign(weight, x[j])));
        } else {
          d = std::max(d, std::abs(y[j]) - weight);
        }
      }
      return d;
    };
  };
  auto box_defect = [](double lo, double hi) {
    return [lo, hi](const BlockVector& a, const BlockVector& g) {
      const Vector x = a.flatten(), y = g.flatten();
      double d = 0.0;
      for (Index j = 0; j < x.size(); ++j) {
        // Points within rounding of a face count as on it (translation by r
        // moves them off the face by an ulp).
        const double band = 1e-12 * (1.0 + std::abs(x[j]));
        d = std::max({d, lo - x[j] - band, x[j] - hi - band});
        if (std::abs(x[j] - lo) <= band) {
          d = std::max(d, y[j]);  // normal cone at lo points down
        } else if (std::abs(x[j] - hi) <= band) {
          d = std::max(d, -y[j]);  // and up at hi
        } else {
          d = std::max(d, std::abs(y[j]));
        }
      }
      return d;
    };
  };

  std::vector<LibraryOp> ops;
  ops.push_back({"zero", prox::zero(sh),
                 [=](const BlockVector&, const BlockVector& g) { return flat_max(g.flatten()); }});
  ops.push_back({"l1_norm", prox::l1_norm(sh, 0.7), l1_defect(0.7)});
  ops.push_back({"squared_l2", prox::squared_l2(sh, 1.3),
                 [=](const BlockVector& a, const BlockVector& g) {
                   return flat_max(g.flatten() - 1.3 * a.flatten());
                 }});
  ops.push_back({"box_indicator", prox::box_indicator(sh, -1.0, 2.0), box_defect(-1.0, 2.0)});
  ops.push_back({"affine", prox::affine(M, c),
                 [=](const BlockVector& a, const BlockVector& g) {
                   return flat_max(g.flatten() - (M * a.flatten() + c));
                 }});
  ops.push_back({"shifted(l1_norm)", shifted(prox::l1_norm(sh, 0.7), zshift),
                 [=](const BlockVector& a, const BlockVector& g) {
                   return l1_defect(0.7)(a, g + zshift);
                 }});
  ops.push_back({"translated(box)", translated(prox::box_indicator(sh, -1.0, 2.0), rshift),
                 [=](const BlockVector& a, const BlockVector& g) {
                   return box_defect(-1.0, 2.0)(a - rshift, g);
                 }});
  ops.push_back({"product(l1_norm, squared_l2)",
                 product_op({prox::l1_norm(Shape{3}, 0.7), prox::squared_l2(Shape{2}, 1.3)}),
                 [=](const BlockVector& a, const BlockVector& g) {
                   const BlockVector a1 = a.slice(0, 1), g1 = g.slice(0, 1);
                   const Vector r2 = g.block(1) - 1.3 * a.block(1);
                   return std::max(l1_defect(0.7)(a1, g1), flat_max(r2));
                 }});
  return ops;
}

CriterionResult ac8_resolvents() {
  CriterionResult res = criterion("AC-8", "resolvents are firmly nonexpansive and yield graph points "
                              "(1000 pairs per library operator)");
  double worst_firm = -std::numeric_limits<double>::infinity();
  double worst_graph = 0.0;
  std::string worst_graph_op;
  const auto t0 = Clock::now();
  std::uint64_t seed = 0xac8;
  for (const LibraryOp& lop : library_operators()) {
    worst_firm = std::max(worst_firm, firm_nonexpansiveness_defect(lop.op, 1000, ++seed));
    Rng rng(++seed);
    for (int j = 0; j < 1000; ++j) {
      const double gamma = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
      const BlockVector w = 3.0 * rng.normal_block_vector(lop.op.shape());
      const GraphPoint g = resolve(lop.op, gamma, w);
      // w = a + gamma a* must hold, and (a, a*) must satisfy the operator's
      // law. The law residual is measured in the scale of w (times gamma,
      // relative to 1 + ||w||), where rounding in a lives.
      BlockVector back = g.point;
      back.axpy(gamma, g.image);
      const double d = std::max(norm(back - w), gamma * lop.graph_defect(g.point, g.image) /
                                                    (1.0 + norm(w)));
      if (d > worst_graph) {
        worst_graph = d;
        worst_graph_op = lop.name;
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = worst_firm <= 1e-10 && worst_graph <= 1e-13;
  res.detail = "firm nonexpansiveness defect " + sci(worst_firm) +
               " (limit 1e-10), graph defect " + sci(worst_graph) + " (limit 1e-13)" +
               (worst_graph_op.empty() ? "" : " (" + worst_graph_op + ")");
  return res;
}

CriterionResult ac9_termination(RunMonitor& mon) {
  CriterionResult res = criterion("AC-9", "starting at the oracle terminates at iteration 0 via the "
                              "tau branch");
  std::vector<std::pair<ProblemSpec, double>> cases;  // spec, gamma = mu
  for (std::uint64_t s = 1; s <= 5; ++s) cases.emplace_back(affine_spec(s), 1.0);
  {
    ProblemSpec spec;
    spec.kind = ProblemKind::kLasso;
    spec.seed = 3;
    spec.dims = {8, 4};
    cases.emplace_back(spec, 1.0);
    spec.kind = ProblemKind::kConsensus;
    spec.dims = {3, 3, 3};
    cases.emplace_back(spec, 1.0);
    spec.kind = ProblemKind::kSumTwo;
    spec.dims = {5};
    cases.emplace_back(spec, 1.0);
  }
  for (double scale : {1e-2, 1.0, 50.0}) {
    for (double step : {1e-2, 1.0, 1e2}) {
      ProblemSpec spec;
      spec.kind = ProblemKind::kNormfreeStress;
      spec.seed = 11;
      spec.dims = {6, 5};
      spec.norm_scale = scale;
      cases.emplace_back(spec, step);
    }
  }
  double worst_kt = 0.0;
  std::string failed;
  const auto t0 = Clock::now();
  for (const auto& [spec, step] : cases) {
    const Instance inst = generate(spec);
    SolverConfig cfg = base_config();
    cfg.gamma = constant_schedule(step);
    cfg.mu = constant_schedule(step);
    const SolveReport r = monitored_solve(inst, *inst.oracle(), cfg, mon,
                                          instance_label(spec) + "@" + sci(step));
    worst_kt = std::max(worst_kt, r.kt_res);
    if (r.reason != StopReason::kTerminalBranch || r.iterations != 0 || r.kt_res > 1e-10) {
      failed += " " + instance_label(spec) + "[" + std::string(to_string(r.reason)) + " at " +
                std::to_string(r.iterations) + "]";
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = failed.empty();
  res.detail = std::to_string(cases.size()) + " instances, kt " + sci(worst_kt) + " (limit 1e-10)" +
               (failed.empty() ? "" : ", failed:" + failed);
  return res;
}

void extra_runs(RunMonitor& mon) {
  // Coupled and sum-form instances from zero, so the identity and tail checks
  // also cover the blockwise iteration.
  for (std::uint64_t seed : {1u, 2u}) {
    ProblemSpec spec;
    spec.seed = seed;
    spec.kind = ProblemKind::kConsensus;
    spec.dims = {3, 3, 3};
    Instance inst = generate(spec);
    monitored_solve(inst, inst.zero_point(), base_config(), mon, instance_label(spec));
    spec.kind = ProblemKind::kSumTwo;
    spec.dims = {5};
    inst = generate(spec);
    monitored_solve(inst, inst.zero_point(), base_config(), mon, instance_label(spec));
  }
}

CriterionResult ac5_identity(const RunMonitor& mon, double seconds) {
  CriterionResult res = criterion("AC-5", "selection identity lhs = ||x-a||^2/gamma + ||Lx-b||^2/mu at "
                              "every iteration");
  res.seconds = seconds;
  res.passed = mon.identity_defect <= 1e-10;
  res.detail = "max |lhs - rhs| " + sci(mon.identity_defect) + " (limit 1e-10) over " +
               std::to_string(mon.identity_steps) + " iterations of " + std::to_string(mon.runs) +
               " runs";
  return res;
}

CriterionResult ac10_tail(const RunMonitor& mon, double seconds) {
  CriterionResult res = criterion("AC-10", "tail (last 5%) of delta, ||s*||, ||t||, ||x-a|| below 1e-6 on "
                               "convergent runs");
  res.seconds = seconds;
  res.passed = mon.tail_runs > 0 && mon.tail_worst < 1e-6;
  res.detail = "worst " + sci(mon.tail_worst) + " (limit 1e-6) over " +
               std::to_string(mon.tail_runs) + " runs" + (mon.tail_worst_run.empty() ? "" : " (" + mon.tail_worst_run + ")") +
               ", " + std::to_string(mon.tail_failures.size()) + " runs above";
  for (const auto& f : mon.tail_failures) res.detail += " " + f;
  return res;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f s", r.seconds);
  std::string id = r.id;
  id.resize(std::max<std::size_t>(id.size(), 6), ' ');
  return id + (r.passed ? "PASS  " : "FAIL  ") + r.description + "  (" + r.detail + "; " + secs +
         ")";
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

std::vector<CriterionResult> run_acceptance(std::ostream* log) {
  RunMonitor mon;
  std::vector<CriterionResult> out;
  auto emit = [&](CriterionResult r) {
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  };
  auto guarded = [&](const char* id, auto&& fn) {
    try {
      emit(fn());
    } catch (const std::exception& e) {
      CriterionResult r = criterion(id, "(aborted)");
      r.detail = std::string("exception: ") + e.what();
      emit(std::move(r));
    }
  };

  const auto t0 = Clock::now();
  guarded("AC-1", [&] { return ac1_fejer(mon); });
  guarded("AC-2", [&] { return ac2_convergence(mon); });
  guarded("AC-3", [&] { return ac3_normfree(mon); });
  guarded("AC-4", [&] { return ac4_halfspace(mon); });
  guarded("AC-6", [&] { return ac6_reduction(); });
  guarded("AC-7", [&] { return ac7_lasso(mon); });
  guarded("AC-8", [&] { return ac8_resolvents(); });
  guarded("AC-9", [&] { return ac9_termination(mon); });
  try {
    extra_runs(mon);
  } catch (const std::exception& e) {
    if (log) *log << "extra runs aborted: " << e.what() << std::endl;
  }
  const double monitored = seconds_since(t0);
  guarded("AC-5", [&] { return ac5_identity(mon, monitored); });
  guarded("AC-10", [&] { return ac10_tail(mon, monitored); });

  std::sort(out.begin(), out.end(), [](const CriterionResult& a, const CriterionResult& b) {
    return std::stoi(a.id.substr(3)) < std::stoi(b.id.substr(3));
  });
  return out;
}

}  // namespace pdsplit::harness
