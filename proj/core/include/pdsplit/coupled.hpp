#pragma once

#include "pdsplit/block_vector.hpp"
#include "pdsplit/linear_map.hpp"
#include "pdsplit/monotone.hpp"
#include "pdsplit/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace pdsplit {

/// Coupled system of m primal inclusions
///   z_i in A_i x_i + sum_k L_ki* B_k(sum_j L_kj x_j - r_k),   i = 1..m,
/// with K coupling operators B_k. Absent grid entries are zero maps.
class CoupledProblem {
 public:
  /// grid is indexed grid[k][i] (K rows, m columns). With `strict`, every
  /// present entry is sampled for adjoint consistency.
  CoupledProblem(std::vector<MonotoneOp> A, std::vector<MonotoneOp> B, std::vector<BlockVector> z,
                 std::vector<BlockVector> r, LinearMapGrid grid, bool strict = false);

  std::size_t m() const { return A_.size(); }
  std::size_t K() const { return B_.size(); }
  const std::vector<MonotoneOp>& A() const { return A_; }
  const std::vector<MonotoneOp>& B() const { return B_; }
  const std::vector<BlockVector>& z() const { return z_; }
  const std::vector<BlockVector>& r() const { return r_; }
  const LinearMapGrid& grid() const { return grid_; }

  std::vector<Shape> primal_shapes() const;
  std::vector<Shape> dual_shapes() const;

  /// sum_i L_ki x_i for every k.
  std::vector<BlockVector> apply_grid(const std::vector<BlockVector>& x) const;
  /// sum_k L_ki* v_k for every i.
  std::vector<BlockVector> apply_grid_adjoint(const std::vector<BlockVector>& v) const;

 private:
  std::vector<MonotoneOp> A_;
  std::vector<MonotoneOp> B_;
  std::vector<BlockVector> z_;
  std::vector<BlockVector> r_;
  LinearMapGrid grid_;
};

/// Per-component primal and dual variables.
struct CoupledPoint {
  std::vector<BlockVector> x;  // m components
  std::vector<BlockVector> v;  // K components

  PDPoint concat() const;
  static CoupledPoint split(const PDPoint& p, const CoupledProblem& cp);
  static CoupledPoint zeros(const CoupledProblem& cp);
};

/// Two-operator problem on the product spaces:
///   A = x (-z_i + A_i),  B = x B_k(. - r_k),  L = [L_ki].
/// Resolvents act blockwise: J_{gamma A_i}(x_i + gamma z_i) and
/// r_k + J_{gamma B_k}(y_k - r_k).
PDProblem reduce_to_pd(const CoupledProblem& cp);

struct CoupledResiduals {
  std::vector<double> primal;  // ||x_i - J_{A_i}(x_i + z_i - sum_k L_ki* v_k)||
  std::vector<double> dual;    // ||l_k - r_k - J_{B_k}(l_k + v_k - r_k)||, l_k = sum_i L_ki x_i
  double total = 0.0;          // Euclidean norm of all entries
};

CoupledResiduals coupled_kt_residuals(const CoupledProblem& cp, const CoupledPoint& p);

/// One step of the blockwise iteration with shared (gamma, mu, lambda).
/// Witness graph points are returned in product form (for the reduced
/// problem) so observers can reuse the two-operator diagnostics.
StepResult coupled_step(const CoupledProblem& cp, const CoupledPoint& p, double gamma, double mu,
                        double lambda, double sigma_tol = 0.0, std::size_t iteration = 0);

/// Runs coupled_step under the same driver, schedules, and stopping rules
/// as solve(). Iterates and the report use the concatenated PDPoint layout.
SolveReport coupled_solve(const CoupledProblem& cp, const CoupledPoint& init,
                          const SolverConfig& cfg = {});

/// Proper convex function known through its proximity operator
/// (prox_{gamma f} = J_{gamma df}) and, optionally, its value.
struct ProxFunction {
  MonotoneOp subdifferential;
  std::function<double(const BlockVector&)> value;
};

namespace functions {

ProxFunction zero(const Shape& shape);
ProxFunction l1_norm(const Shape& shape, double weight = 1.0);
ProxFunction squared_l2(const Shape& shape, double weight = 1.0);
/// Indicator of [lo, hi]^n (value 0 inside, +inf outside).
ProxFunction box_indicator(const Shape& shape, double lo, double hi);

}  // namespace functions

/// minimize  sum_i (f_i(x_i) - <x_i, z_i>) + sum_k g_k(sum_i L_ki x_i - r_k).
///
/// The caller is responsible for the constraint qualification
///   z_i in ran(df_i + sum_k L_ki* o dg_k o (sum_j L_kj . - r_k));
/// in finite dimensions it holds when some x has x_i in ri dom f_i and
/// sum_i L_ki x_i - r_k in ri dom g_k for every i and k.
class MinProblem {
 public:
  MinProblem(std::vector<ProxFunction> f, std::vector<ProxFunction> g, std::vector<BlockVector> z,
             std::vector<BlockVector> r, LinearMapGrid grid);

  const CoupledProblem& coupled() const { return coupled_; }
  /// True when every f_i and g_k has a value evaluator.
  bool has_objective() const;
  /// Objective at x; throws ParameterError when an evaluator is missing.
  double objective(const std::vector<BlockVector>& x) const;

 private:
  std::vector<ProxFunction> f_;
  std::vector<ProxFunction> g_;
  CoupledProblem coupled_;
};

/// coupled_solve with A_i = df_i, B_k = dg_k. When every function has an
/// evaluator, report.objective holds the objective at init followed by
/// the objective after every iteration.
SolveReport solve_min(const MinProblem& mp, const CoupledPoint& init, const SolverConfig& cfg = {});

}  // namespace pdsplit
