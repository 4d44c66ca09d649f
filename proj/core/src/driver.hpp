#pragma once

#include "pdsplit/solver.hpp"

#include <cstddef>
#include <functional>
#include <limits>

namespace pdsplit::detail {

/// Maps (iterate, iteration index, absolute sigma tolerance) to a step.
using StepFn = std::function<StepResult(const PDPoint&, std::size_t, double)>;

/// Relative size of the rounding noise tolerated in sqrt(tau) before the
/// terminal branch fires, measured against the magnitudes entering the step.
inline constexpr double kRoundoffFactor = 4096.0 * std::numeric_limits<double>::epsilon();

/// True when sqrt(tau) is below the absolute tolerance, or (for a positive
/// tolerance) within rounding noise of the quantities the step was built from.
inline bool below_sigma_floor(double tau, double sigma_tol, double magnitude) {
  if (tau <= sigma_tol * sigma_tol) return true;
  if (!(sigma_tol > 0.0)) return false;
  const double floor = kRoundoffFactor * magnitude;
  return tau <= floor * floor;
}

/// Shared iteration loop: stopping rules, trace, observer, selection check.
/// `prob` supplies the residual and the linear map for diagnostics.
SolveReport drive(const PDProblem& prob, const PDPoint& init, const SolverConfig& cfg,
                  const StepFn& step);

}  // namespace pdsplit::detail
