#include "pdsplit/solver.hpp"

#include "driver.hpp"

#include "pdsplit/errors.hpp"
#include "pdsplit/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace pdsplit {

namespace {

constexpr double kAdjointTolerance = 1e-8;
constexpr double kSelectionSlack = 1e-10;

void require_finite(const BlockVector& v, const char* what, std::size_t iteration) {
  if (!v.all_finite()) throw NumericError(std::string("non-finite ") + what, iteration);
}

void require_finite(double v, const char* what, std::size_t iteration) {
  if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what, iteration);
}

void require_point_shape(const PDPoint& p, const PDProblem& prob) {
  require_same_shape(p.x.shape(), prob.L().in_shape(), "initial primal point");
  require_same_shape(p.v.shape(), prob.L().out_shape(), "initial dual point");
}

}  // namespace

namespace detail {

SolveReport drive(const PDProblem& prob, const PDPoint& init, const SolverConfig& cfg,
                  const StepFn& step) {
  cfg.validate();
  require_point_shape(init, prob);
  const double alpha = cfg.selection_alpha.value_or(1e-12);

  SolveReport report;
  report.trace.reserve(std::min<std::size_t>(cfg.max_iters, 4096));
  PDPoint p = init;
  for (std::size_t n = 0; n < cfg.max_iters; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = cfg.sigma_tol * (1.0 + norm(p));
    StepResult r = step(p, n, tol);

    if (cfg.check_selection && !check_selection_quality(p, r.a, r.b, prob.L(), alpha)) {
      throw NumericError("selection-quality inequality violated", n);
    }

    const PDPoint& after = r.terminated ? *r.solution : r.next;
    const double kt = kt_residual(after, prob.A(), prob.B(), prob.L());
    const auto wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    report.trace.push_back({r.diag, kt, static_cast<std::int64_t>(wall)});
    if (cfg.observer) {
      cfg.observer(IterationEvent{n, p, after, r.diag, r.a, r.b, r.terminated, kt,
                                  static_cast<std::int64_t>(wall)});
    }

    if (r.terminated) {
      report.solution = std::move(*r.solution);
      report.iterations = n;
      report.reason = StopReason::kTerminalBranch;
      report.kt_res = kt;
      return report;
    }

    double metric = kt;
    switch (cfg.stopping) {
      case StoppingRule::kKtResidual:
        break;
      case StoppingRule::kDelta:
        metric = r.diag.delta;
        break;
      case StoppingRule::kStepNorm:
        metric = std::sqrt(r.diag.tau);
        break;
    }
    p = std::move(r.next);
    if (metric <= cfg.residual_tol) {
      report.solution = std::move(p);
      report.iterations = n + 1;
      report.reason = StopReason::kConverged;
      report.kt_res = kt;
      return report;
    }
  }
  report.kt_res = kt_residual(p, prob.A(), prob.B(), prob.L());
  report.solution = std::move(p);
  report.iterations = cfg.max_iters;
  report.reason = StopReason::kMaxIterations;
  return report;
}

}  // namespace detail

namespace {

void check_schedules(const SolverConfig& cfg, double gamma, double mu, double lambda,
                     std::size_t n) {
  const double eps = cfg.epsilon;
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(gamma, eps, 1.0 / eps) || !in(mu, eps, 1.0 / eps)) {
    throw ParameterError("step sizes (" + std::to_string(gamma) + ", " + std::to_string(mu) +
                         ") outside [eps, 1/eps] at iteration " + std::to_string(n));
  }
  if (!in(lambda, eps, 2.0 - eps)) {
    throw ParameterError("relaxation " + std::to_string(lambda) +
                         " outside [eps, 2 - eps] at iteration " + std::to_string(n));
  }
}

}  // namespace

PDProblem::PDProblem(MonotoneOp A, MonotoneOp B, LinearMap L, bool strict)
    : A_(std::move(A)), B_(std::move(B)), L_(std::move(L)) {
  require_same_shape(A_.shape(), L_.in_shape(), "PDProblem (A vs domain of L)");
  require_same_shape(B_.shape(), L_.out_shape(), "PDProblem (B vs range of L)");
  if (strict) {
    const double defect = check_adjoint(L_, 8, 0x5eed);
    if (defect > kAdjointTolerance) {
      throw ParameterError("PDProblem: adjoint defect " + std::to_string(defect) +
                           " exceeds tolerance");
    }
  }
}

PDPoint PDProblem::zero_point() const {
  return {BlockVector(L_.in_shape()), BlockVector(L_.out_shape())};
}

Schedule constant_schedule(double value) {
  return [value](std::size_t) { return value; };
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTerminalBranch:
      return "terminal_branch";
    case StopReason::kConverged:
      return "converged";
    case StopReason::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in ]0,1[");
  if (!gamma || !mu || !lambda) throw ParameterError("missing parameter schedule");
  if (!(sigma_tol >= 0.0)) throw ParameterError("sigma_tol must be nonnegative");
  if (!(residual_tol >= 0.0)) throw ParameterError("residual_tol must be nonnegative");
  if (selection_alpha && !(*selection_alpha > 0.0)) {
    throw ParameterError("selection_alpha must be positive");
  }
}

StepResult pd_step(const PDPoint& p, const PDProblem& prob, double gamma, double mu, double lambda,
                   double sigma_tol, std::size_t iteration) {
  if (!(gamma > 0.0) || !(mu > 0.0)) throw ParameterError("pd_step: gamma and mu must be > 0");
  if (!(lambda > 0.0 && lambda < 2.0)) throw ParameterError("pd_step: lambda must be in ]0,2[");
  const LinearMap& L = prob.L();

  const BlockVector Lstar_v = L.apply_adjoint(p.v);
  BlockVector wa = p.x;
  wa.axpy(-gamma, Lstar_v);
  GraphPoint a = resolve(prob.A(), gamma, wa);
  require_finite(a.point, "resolvent of A", iteration);

  const BlockVector l = L.apply(p.x);
  BlockVector wb = l;
  wb.axpy(mu, p.v);
  GraphPoint b = resolve(prob.B(), mu, wb);
  require_finite(b.point, "resolvent of B", iteration);

  const BlockVector x_minus_a = p.x - a.point;
  const BlockVector l_minus_b = l - b.point;
  BlockVector s = (1.0 / gamma) * x_minus_a;
  s.axpy(1.0 / mu, L.apply_adjoint(l_minus_b));
  const BlockVector La = L.apply(a.point);
  BlockVector t = b.point - La;

  StepResult out;
  StepDiag& d = out.diag;
  d.gamma = gamma;
  d.mu = mu;
  d.lambda = lambda;
  d.s_norm2 = squared_norm(s);
  d.t_norm2 = squared_norm(t);
  d.tau = d.s_norm2 + d.t_norm2;
  const double xa2 = squared_norm(x_minus_a);
  const double lb2 = squared_norm(l_minus_b);
  d.x_gap = std::sqrt(xa2);
  d.l_gap = std::sqrt(lb2);
  d.numerator = xa2 / gamma + lb2 / mu;
  require_finite(d.tau, "tau", iteration);
  require_finite(d.numerator, "step numerator", iteration);

  const double magnitude = 1.0 + norm(p) + (1.0 + 1.0 / gamma) * norm(wa) +
                           (1.0 + 1.0 / mu) * norm(wb) + norm(Lstar_v) + norm(l) + norm(La);
  if (detail::below_sigma_floor(d.tau, sigma_tol, magnitude)) {
    BlockVector v_bar = p.v;
    v_bar.axpy(1.0 / mu, l_minus_b);
    out.terminated = true;
    out.solution = PDPoint{a.point, std::move(v_bar)};
    out.next = p;
  } else {
    d.delta = d.numerator / std::sqrt(d.tau);
    d.theta = lambda * d.numerator / d.tau;
    out.next = p;
    out.next.x.axpy(-d.theta, s);
    out.next.v.axpy(-d.theta, t);
    require_finite(out.next.x, "primal iterate", iteration);
    require_finite(out.next.v, "dual iterate", iteration);
  }
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

SelectionTerms selection_terms(const PDPoint& p, const GraphPoint& a, const GraphPoint& b,
                               const LinearMap& L) {
  const BlockVector Lx = L.apply(p.x);
  SelectionTerms st;
  st.lhs = inner(p.x - a.point, a.image + L.apply_adjoint(p.v)) + inner(Lx - b.point, b.image - p.v);
  const BlockVector s = a.image + L.apply_adjoint(b.image);
  const BlockVector t = L.apply(a.point) - b.point;
  st.gap2 = squared_norm(s) + squared_norm(t);
  return st;
}

bool check_selection_quality(const PDPoint& p, const GraphPoint& a, const GraphPoint& b,
                             const LinearMap& L, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("check_selection_quality: alpha must be > 0");
  const SelectionTerms st = selection_terms(p, a, b, L);
  return st.lhs >= alpha * st.gap2 - kSelectionSlack;
}

double selection_alpha_bound(double epsilon, double norm_bound) {
  const double n2 = norm_bound * norm_bound;
  return epsilon / (1.0 + n2 + 2.0 * (1.0 - epsilon * epsilon) * std::max(1.0, n2));
}

SolveReport solve(const PDProblem& prob, const PDPoint& init, const SolverConfig& cfg) {
  return detail::drive(prob, init, cfg, [&](const PDPoint& p, std::size_t n, double tol) {
    const double gamma = cfg.gamma(n);
    const double mu = cfg.mu(n);
    const double lambda = cfg.lambda(n);
    check_schedules(cfg, gamma, mu, lambda, n);
    return pd_step(p, prob, gamma, mu, lambda, tol, n);
  });
}

SolveReport solve_normal_cone_free(const PDProblem& prob, const PDPoint& init, double lambda,
                                   SolverConfig cfg) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw ParameterError("solve_normal_cone_free: lambda must be in ]0,2[");
  }
  Rng rng(0xa11ce);
  const BlockVector probe = rng.normal_block_vector(prob.A().shape());
  if (!(prob.A().resolvent(1.0, probe) == probe)) {
    throw ParameterError("solve_normal_cone_free: A is not the zero operator");
  }
  cfg.gamma = constant_schedule(1.0);
  cfg.mu = constant_schedule(1.0);
  cfg.lambda = constant_schedule(lambda);
  // lambda is only required to lie in ]0,2[ here.
  cfg.epsilon = std::min({cfg.epsilon, lambda, 2.0 - lambda});
  return solve(prob, init, cfg);
}

SolveReport solve_sum(const MonotoneOp& A, const MonotoneOp& B, const PDPoint& init,
                      const SolverConfig& cfg) {
  require_same_shape(A.shape(), B.shape(), "solve_sum");
  const PDProblem prob(A, B, LinearMap::identity(A.shape()));
  return solve(prob, init, cfg);
}

Selector resolvent_selector(const PDProblem& prob, Schedule gamma, Schedule mu) {
  return [prob, gamma = std::move(gamma), mu = std::move(mu)](const PDPoint& p, std::size_t n) {
    const double g = gamma(n);
    const double m = mu(n);
    const LinearMap& L = prob.L();
    BlockVector wa = p.x;
    wa.axpy(-g, L.apply_adjoint(p.v));
    BlockVector wb = L.apply(p.x);
    wb.axpy(m, p.v);
    return std::make_pair(resolve(prob.A(), g, wa), resolve(prob.B(), m, wb));
  };
}

StepResult conceptual_step(const PDPoint& p, const LinearMap& L, const GraphPoint& a,
                           const GraphPoint& b, double lambda, double sigma_tol) {
  const HalfSpaceCert h = build_halfspace(a, b, L);
  StepResult out;
  StepDiag& d = out.diag;
  d.lambda = lambda;
  d.s_norm2 = squared_norm(h.s_primal);
  d.t_norm2 = squared_norm(h.s_dual);
  d.tau = d.s_norm2 + d.t_norm2;
  d.x_gap = norm(p.x - a.point);
  d.l_gap = norm(L.apply(p.x) - b.point);
  const double sigma = std::sqrt(d.tau);
  if (!(sigma > sigma_tol)) {
    out.terminated = true;
    out.solution = PDPoint{a.point, b.image};
    out.next = p;
  } else {
    const Projection proj = project_halfspace(p, h);
    d.delta = proj.delta;
    d.numerator = proj.delta * sigma;
    d.theta = lambda * proj.delta / sigma;
    out.next = p;
    out.next.x.axpy(-d.theta, h.s_primal);
    out.next.v.axpy(-d.theta, h.s_dual);
  }
  out.a = a;
  out.b = b;
  return out;
}

SolveReport solve_conceptual(const PDProblem& prob, const PDPoint& init, const Selector& selector,
                             const SolverConfig& cfg) {
  return detail::drive(prob, init, cfg, [&](const PDPoint& p, std::size_t n, double tol) {
    const double lambda = cfg.lambda(n);
    if (!(lambda > 0.0 && lambda < 2.0)) {
      throw ParameterError("relaxation outside ]0,2[ at iteration " + std::to_string(n));
    }
    auto [a, b] = selector(p, n);
    StepResult r = conceptual_step(p, prob.L(), a, b, lambda, tol);
    if (!r.terminated) {
      require_finite(r.next.x, "primal iterate", n);
      require_finite(r.next.v, "dual iterate", n);
    }
    return r;
  });
}

}  // namespace pdsplit
