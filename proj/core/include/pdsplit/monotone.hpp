#pragma once

#include "pdsplit/block_vector.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace pdsplit {

/// Maximally monotone operator, represented only by its resolvent
/// J_{gamma A} = (Id + gamma A)^{-1}. The resolvent must be a pure
/// function of (gamma, w).
class MonotoneOp {
 public:
  using Resolvent = std::function<BlockVector(double gamma, const BlockVector& w)>;

  MonotoneOp(Shape shape, Resolvent resolvent);

  const Shape& shape() const { return shape_; }

  /// J_{gamma A}(w). Throws ParameterError for gamma <= 0 and ShapeError
  /// when w has the wrong layout.
  BlockVector resolvent(double gamma, const BlockVector& w) const;

 private:
  Shape shape_;
  Resolvent resolvent_;
};

/// A point of gra A: `image` is an element of A(`point`).
struct GraphPoint {
  BlockVector point;
  BlockVector image;
};

/// a = J_{gamma A}(w) together with the certificate (a, (w - a)/gamma).
GraphPoint resolve(const MonotoneOp& op, double gamma, const BlockVector& w);

/// Operator x -> -z + A x. Resolvent w -> J_{gamma A}(w + gamma z).
MonotoneOp shifted(const MonotoneOp& op, const BlockVector& z);

/// Operator y -> B(y - r). Resolvent w -> r + J_{gamma B}(w - r).
MonotoneOp translated(const MonotoneOp& op, const BlockVector& r);

/// Direct product (x_1, ..., x_n) -> A_1 x_1 x ... x A_n x_n; every
/// component resolvent is evaluated with the same gamma.
MonotoneOp product_op(const std::vector<MonotoneOp>& ops);

/// Largest observed violation of ||Ja - Jb||^2 <= <a - b, Ja - Jb> over
/// `pairs` random normal pairs (scaled by `spread`) and gamma drawn
/// log-uniformly in [1e-2, 1e2]. Non-positive means no violation.
double firm_nonexpansiveness_defect(const MonotoneOp& op, int pairs, std::uint64_t seed,
                                    double spread = 3.0);

namespace prox {

/// Zero operator; resolvent is the identity.
MonotoneOp zero(const Shape& shape);

/// Subdifferential of weight * ||.||_1; resolvent is soft-thresholding at
/// gamma * weight.
MonotoneOp l1_norm(const Shape& shape, double weight = 1.0);

/// Gradient of (weight/2) ||.||^2; resolvent is w / (1 + gamma * weight).
MonotoneOp squared_l2(const Shape& shape, double weight = 1.0);

/// Normal cone of the box [lo, hi]^n; resolvent is the clamp.
MonotoneOp box_indicator(const Shape& shape, double lo, double hi);

/// x -> M x + c on a single block, with M monotone (symmetric part
/// positive semidefinite up to -1e-10). The resolvent solves
/// (I + gamma M) p = w - gamma c densely; meant for test oracles and
/// generated instances rather than production use.
MonotoneOp affine(Matrix M, Vector c);

/// Soft-thresholding of every coordinate at `threshold`.
BlockVector soft_threshold(const BlockVector& w, double threshold);

}  // namespace prox

}  // namespace pdsplit
