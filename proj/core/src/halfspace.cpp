#include "pdsplit/halfspace.hpp"

#include "pdsplit/errors.hpp"

#include <cmath>
#include <string>

namespace pdsplit {

double inner(const PDPoint& a, const PDPoint& b) { return inner(a.x, b.x) + inner(a.v, b.v); }

double squared_norm(const PDPoint& p) { return squared_norm(p.x) + squared_norm(p.v); }

double norm(const PDPoint& p) { return std::sqrt(squared_norm(p)); }

PDPoint operator-(const PDPoint& a, const PDPoint& b) { return {a.x - b.x, a.v - b.v}; }

double HalfSpaceCert::sigma() const {
  return std::sqrt(squared_norm(s_primal) + squared_norm(s_dual));
}

double HalfSpaceCert::violation(const PDPoint& p) const {
  return inner(p.x, s_primal) + inner(p.v, s_dual) - eta;
}

HalfSpaceCert build_halfspace(const GraphPoint& a, const GraphPoint& b, const LinearMap& L) {
  require_same_shape(a.point.shape(), L.in_shape(), "build_halfspace (A side)");
  require_same_shape(b.point.shape(), L.out_shape(), "build_halfspace (B side)");
  HalfSpaceCert h;
  h.s_primal = a.image + L.apply_adjoint(b.image);
  h.s_dual = b.point - L.apply(a.point);
  h.eta = inner(a.point, a.image) + inner(b.point, b.image);
  return h;
}

Projection project_halfspace(const PDPoint& p, const HalfSpaceCert& h, double sigma_tol) {
  require_same_shape(p.x.shape(), h.s_primal.shape(), "project_halfspace (primal)");
  require_same_shape(p.v.shape(), h.s_dual.shape(), "project_halfspace (dual)");
  const double sigma = h.sigma();
  if (!(sigma > sigma_tol)) return {p, 0.0};
  const double delta = h.violation(p) / sigma;
  if (!(delta > 0.0)) return {p, 0.0};
  const double step = delta / sigma;
  PDPoint out = p;
  out.x.axpy(-step, h.s_primal);
  out.v.axpy(-step, h.s_dual);
  return {std::move(out), delta};
}

PDPoint relaxed_step(const PDPoint& p, const HalfSpaceCert& h, double lambda, double sigma_tol) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw ParameterError("relaxed_step: lambda must lie in ]0,2[, got " + std::to_string(lambda));
  }
  const Projection proj = project_halfspace(p, h, sigma_tol);
  if (proj.delta == 0.0) return p;
  PDPoint out = p;
  out.x.axpy(lambda, proj.point.x - p.x);
  out.v.axpy(lambda, proj.point.v - p.v);
  return out;
}

double kt_residual(const PDPoint& p, const MonotoneOp& A, const MonotoneOp& B,
                   const LinearMap& L) {
  const BlockVector Lx = L.apply(p.x);
  const BlockVector primal_gap = p.x - A.resolvent(1.0, p.x - L.apply_adjoint(p.v));
  const BlockVector dual_gap = Lx - B.resolvent(1.0, Lx + p.v);
  return std::sqrt(squared_norm(primal_gap) + squared_norm(dual_gap));
}

}  // namespace pdsplit
