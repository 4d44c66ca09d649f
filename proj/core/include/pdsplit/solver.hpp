#pragma once

#include "pdsplit/block_vector.hpp"
#include "pdsplit/halfspace.hpp"
#include "pdsplit/linear_map.hpp"
#include "pdsplit/monotone.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace pdsplit {

/// Find x with 0 in A x + L* B L x, together with a dual v* such that
/// -L* v* in A x and L x in B^{-1} v*.
class PDProblem {
 public:
  /// With `strict`, L is sampled for adjoint consistency and construction
  /// fails (ParameterError) when the relative defect exceeds 1e-8.
  PDProblem(MonotoneOp A, MonotoneOp B, LinearMap L, bool strict = false);

  const MonotoneOp& A() const { return A_; }
  const MonotoneOp& B() const { return B_; }
  const LinearMap& L() const { return L_; }

  PDPoint zero_point() const;

 private:
  MonotoneOp A_;
  MonotoneOp B_;
  LinearMap L_;
};

using Schedule = std::function<double(std::size_t iteration)>;

Schedule constant_schedule(double value);

/// Diagnostics of one step of the resolvent-driven iteration.
struct StepDiag {
  double gamma = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double s_norm2 = 0.0;    // ||s*||^2
  double t_norm2 = 0.0;    // ||t||^2
  double tau = 0.0;        // s_norm2 + t_norm2
  double theta = 0.0;      // step length along (s*, t); 0 on the terminal step
  double delta = 0.0;      // distance from the iterate to the separating half-space
  double numerator = 0.0;  // ||x - a||^2 / gamma + ||L x - b||^2 / mu
  double x_gap = 0.0;      // ||x - a||
  double l_gap = 0.0;      // ||L x - b||
};

struct StepResult {
  /// Next iterate, or the input unchanged when `terminated`.
  PDPoint next;
  StepDiag diag;
  /// Graph points of A and B certifying the half-space used by the step.
  GraphPoint a;
  GraphPoint b;
  bool terminated = false;
  /// Kuhn-Tucker point returned by the terminal branch.
  std::optional<PDPoint> solution;
};

/// One step of the resolvent selection rule:
///   a = J_{gamma A}(x - gamma L* v),  l = L x,  b = J_{mu B}(l + mu v),
///   s* = (x - a)/gamma + L*(l - b)/mu,  t = b - L a,
///   tau = ||s*||^2 + ||t||^2.
/// If tau <= sigma_tol^2 the step terminates with (a, v + (l - b)/mu).
/// With sigma_tol > 0 it also terminates when sqrt(tau) is within rounding
/// noise (about 1e-12 relative) of the magnitudes of x, v, the resolvent
/// arguments and outputs, L a and L* v: at an exact Kuhn-Tucker point
/// tau is pure rounding error and can exceed any fixed absolute floor.
/// otherwise (x, v) moves by -theta (s*, t) with
///   theta = lambda (||x - a||^2/gamma + ||l - b||^2/mu) / tau.
/// Throws NumericError (tagged with `iteration`) on non-finite values.
StepResult pd_step(const PDPoint& p, const PDProblem& prob, double gamma, double mu, double lambda,
                   double sigma_tol = 0.0, std::size_t iteration = 0);

/// Both sides of the selection-quality inequality
///   <x - a, a* + L* v> + <L x - b, b* - v>  >=  alpha (||a* + L* b*||^2 + ||L a - b||^2).
struct SelectionTerms {
  double lhs = 0.0;
  double gap2 = 0.0;  // ||a* + L* b*||^2 + ||L a - b||^2
};

SelectionTerms selection_terms(const PDPoint& p, const GraphPoint& a, const GraphPoint& b,
                               const LinearMap& L);

/// True iff the quadruple (a, b, a*, b*) satisfies the inequality above
/// within 1e-10.
bool check_selection_quality(const PDPoint& p, const GraphPoint& a, const GraphPoint& b,
                             const LinearMap& L, double alpha);

/// alpha guaranteed for the resolvent rule when (gamma, mu) lie in
/// [eps, 1/eps] and ||L|| <= norm_bound. Only used by diagnostics; the
/// solver never needs a bound on ||L||.
double selection_alpha_bound(double epsilon, double norm_bound);

enum class StopReason {
  kTerminalBranch,  // tau fell below the tolerance; the returned point is exact
  kConverged,       // stopping metric dropped below residual_tol
  kMaxIterations,
};

std::string_view to_string(StopReason reason);

enum class StoppingRule {
  kKtResidual,  // natural residual of the new iterate (default)
  kDelta,       // distance to the last separating half-space
  kStepNorm,    // sqrt(tau)
};

/// Per-iteration event for observers and trace sinks.
struct IterationEvent {
  std::size_t n = 0;
  const PDPoint& before;
  const PDPoint& after;  // the returned solution on the terminal step
  const StepDiag& diag;
  const GraphPoint& a;
  const GraphPoint& b;
  bool terminal = false;
  double kt_res = 0.0;
  std::int64_t wall_ns = 0;
};

using Observer = std::function<void(const IterationEvent&)>;

struct SolverConfig {
  double epsilon = 1e-3;
  Schedule gamma = constant_schedule(1.0);
  Schedule mu = constant_schedule(1.0);
  Schedule lambda = constant_schedule(1.8);
  std::size_t max_iters = 100000;
  /// Relative: the terminal branch fires when sqrt(tau) <= sigma_tol (1 + ||p||),
  /// or when sqrt(tau) is at the rounding level of the step (see pd_step).
  double sigma_tol = 1e-14;
  double residual_tol = 1e-8;
  StoppingRule stopping = StoppingRule::kKtResidual;
  /// Debug: assert the selection-quality inequality at every step with
  /// `selection_alpha` (1e-12 when unset).
  bool check_selection = false;
  std::optional<double> selection_alpha;
  Observer observer;

  /// Throws ParameterError unless epsilon in ]0,1[ and the tolerances are sane.
  void validate() const;
};

struct IterationRecord {
  StepDiag diag;
  double kt_res = 0.0;  // residual of the point produced by this step
  std::int64_t wall_ns = 0;
};

struct SolveReport {
  PDPoint solution;
  std::size_t iterations = 0;
  StopReason reason = StopReason::kMaxIterations;
  double kt_res = 0.0;
  std::vector<IterationRecord> trace;
  /// Filled by the minimization frontend when objective evaluators exist.
  std::vector<double> objective;

  bool converged() const { return reason != StopReason::kMaxIterations; }
};

/// Runs pd_step until the terminal branch, the stopping rule, or
/// max_iters. Schedules are checked against [eps, 1/eps] and
/// [eps, 2 - eps] at every iteration (ParameterError otherwise).
SolveReport solve(const PDProblem& prob, const PDPoint& init, const SolverConfig& cfg = {});

/// Instance with A = 0, gamma = mu = 1 and a fixed lambda; reduces to
///   a = x - L* v,  b = J_B(L x + v).
/// The zero-ness of A is spot-checked on a sample (ParameterError otherwise).
SolveReport solve_normal_cone_free(const PDProblem& prob, const PDPoint& init, double lambda,
                                   SolverConfig cfg = {});

/// Instance with L = Id: find x with 0 in A x + B x.
SolveReport solve_sum(const MonotoneOp& A, const MonotoneOp& B, const PDPoint& init,
                      const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Generic Fejer engine: any rule that hands out graph points of A and B.

using Selector = std::function<std::pair<GraphPoint, GraphPoint>(const PDPoint& p,
                                                                 std::size_t iteration)>;

/// Selector reproducing the resolvent rule of pd_step (with the graph
/// certificates a* = (x - a)/gamma - L* v, b* = (l - b)/mu + v).
Selector resolvent_selector(const PDProblem& prob, Schedule gamma, Schedule mu);

/// Relaxed projection of p onto the half-space built from the selected
/// graph points. Terminates with (a, b*) when sigma <= sigma_tol.
StepResult conceptual_step(const PDPoint& p, const LinearMap& L, const GraphPoint& a,
                           const GraphPoint& b, double lambda, double sigma_tol = 0.0);

SolveReport solve_conceptual(const PDProblem& prob, const PDPoint& init, const Selector& selector,
                             const SolverConfig& cfg = {});

}  // namespace pdsplit
