#pragma once

#include "pdsplit/coupled.hpp"
#include "pdsplit/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdsplit::harness {

enum class ProblemKind { kAffinePd, kLasso, kConsensus, kSumTwo, kNormfreeStress };

std::string_view to_string(ProblemKind kind);
/// Throws ParameterError for unknown names.
ProblemKind parse_problem_kind(std::string_view name);

/// Fully determines a generated instance.
///
/// dims, per kind:
///   affine_pd, normfree_stress: {n, k} primal and dual dimension ({n} means k = n)
///   lasso:                      {features, rows}
///   consensus:                  one entry per block, all equal
///   sum_two:                    {n}
struct ProblemSpec {
  ProblemKind kind = ProblemKind::kAffinePd;
  std::vector<Index> dims{4};
  std::uint64_t seed = 0;
  double lambda_reg = 0.1;    // lasso
  double norm_scale = 1.0;    // spectral norm of L (affine_pd, normfree_stress)
  double strong_shift = 0.5;  // added to the symmetric parts of generated affine operators
  double skew_scale = 0.5;    // size of their skew-symmetric parts
  bool identical_blocks = false;  // consensus: same data in every block
};

/// Dense data of x -> P x + c and y -> Q y + d coupled through L.
struct AffineData {
  Matrix P;
  Vector c;
  Matrix Q;
  Vector d;
  Matrix L;
};

/// Kuhn-Tucker point of the affine pair: (P + L^T Q L) x = -c - L^T d,
/// v = Q L x + d. One step of iterative refinement is applied.
PDPoint affine_kt_point(const AffineData& data);

/// Minimizer of lambda ||x||_1 + 1/2 ||M x - y||^2 by ISTA with step
/// 1/||M||^2, stopped when ||x_{k+1} - x_k|| <= tol.
struct IstaResult {
  Vector x;
  double objective = 0.0;
  std::size_t iterations = 0;
};
IstaResult ista_lasso(const Matrix& M, const Vector& y, double lambda, double tol = 1e-10,
                      std::size_t max_iters = 10'000'000);

/// Refines a lasso solution by solving the linear system on its support
/// with the observed signs; returns the refined point when it satisfies
/// the optimality conditions, otherwise the input.
Vector polish_lasso(const Matrix& M, const Vector& y, double lambda, const Vector& x);

double lasso_objective(const Matrix& M, const Vector& y, double lambda, const Vector& x);

/// A generated problem together with its oracle Kuhn-Tucker point.
class Instance {
 public:
  const ProblemSpec& spec() const { return spec_; }

  /// Two-operator view (the product-space reduction for consensus and
  /// lasso). Used for residuals and for solving affine_pd / sum_two.
  const PDProblem& pd() const { return *pd_; }
  const CoupledProblem* coupled() const { return coupled_ ? &*coupled_ : nullptr; }
  const MinProblem* min_problem() const { return min_ ? &*min_ : nullptr; }
  const std::optional<AffineData>& affine() const { return affine_; }

  /// Oracle KT point in the PDPoint layout of pd().
  const std::optional<PDPoint>& oracle() const { return oracle_; }
  /// Lasso only: objective reached by the ISTA oracle.
  std::optional<double> oracle_objective() const { return oracle_objective_; }

  PDPoint zero_point() const { return pd_->zero_point(); }

  /// Solves with the kind's own entry point (solve, solve_sum,
  /// coupled_solve, or solve_min).
  SolveReport solve(const PDPoint& init, const SolverConfig& cfg) const;

  double kt_residual(const PDPoint& p) const;

 private:
  friend Instance generate(const ProblemSpec& spec);

  ProblemSpec spec_;
  std::optional<PDProblem> pd_;
  std::optional<CoupledProblem> coupled_;
  std::optional<MinProblem> min_;
  std::optional<AffineData> affine_;
  std::optional<PDPoint> oracle_;
  std::optional<double> oracle_objective_;
  // lasso data, kept for the oracle objective
  Matrix lasso_M_;
  Vector lasso_y_;
};

/// Pure function of the spec. Throws ParameterError on invalid dims.
Instance generate(const ProblemSpec& spec);

/// Random coupled system for reduction cross-checks: m, K in [1, max_blocks],
/// block dimensions in [1, max_dim], a random sparse grid of dense maps
/// (every row and column nonempty), affine A_i, and B_k drawn from the
/// affine / l1 / box / squared-l2 families.
CoupledProblem random_coupled(std::uint64_t seed, std::size_t max_blocks = 3, Index max_dim = 5);

}  // namespace pdsplit::harness
