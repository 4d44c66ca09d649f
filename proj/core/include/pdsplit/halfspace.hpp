#pragma once

#include "pdsplit/block_vector.hpp"
#include "pdsplit/linear_map.hpp"
#include "pdsplit/monotone.hpp"

namespace pdsplit {

/// Primal-dual pair (x, v*) in H (+) G.
struct PDPoint {
  BlockVector x;
  BlockVector v;

  friend bool operator==(const PDPoint&, const PDPoint&) = default;
};

double inner(const PDPoint& a, const PDPoint& b);
double squared_norm(const PDPoint& p);
double norm(const PDPoint& p);
PDPoint operator-(const PDPoint& a, const PDPoint& b);

/// Closed half-space { (x, v*) : <x, s_primal> + <v*, s_dual> <= eta } of
/// H (+) G. Built from one graph point of A and one of B, it contains
/// every Kuhn-Tucker point of the pair (A, B) coupled through L.
struct HalfSpaceCert {
  BlockVector s_primal;  // a* + L* b*
  BlockVector s_dual;    // b - L a
  double eta = 0.0;      // <a, a*> + <b, b*>

  /// ||(s_primal, s_dual)||
  double sigma() const;
  /// <p, s> - eta; positive means p lies outside.
  double violation(const PDPoint& p) const;
};

HalfSpaceCert build_halfspace(const GraphPoint& a, const GraphPoint& b, const LinearMap& L);

struct Projection {
  PDPoint point;
  double delta = 0.0;  // distance from the input to the half-space
};

/// Exact projection onto the half-space. When sigma <= sigma_tol the
/// half-space is treated as the whole space and the input is returned.
Projection project_halfspace(const PDPoint& p, const HalfSpaceCert& h, double sigma_tol = 0.0);

/// p + lambda (P_H p - p), lambda in ]0, 2[.
PDPoint relaxed_step(const PDPoint& p, const HalfSpaceCert& h, double lambda,
                     double sigma_tol = 0.0);

/// Natural residual
///   sqrt(||x - J_A(x - L* v)||^2 + ||L x - J_B(L x + v)||^2)
/// with unit resolvent parameters. Zero exactly on the Kuhn-Tucker set.
double kt_residual(const PDPoint& p, const MonotoneOp& A, const MonotoneOp& B,
                   const LinearMap& L);

}  // namespace pdsplit
