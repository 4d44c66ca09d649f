#include "pdsplit/monotone.hpp"

#include "pdsplit/errors.hpp"
#include "pdsplit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace pdsplit {

MonotoneOp::MonotoneOp(Shape shape, Resolvent resolvent)
    : shape_(std::move(shape)), resolvent_(std::move(resolvent)) {
  if (!resolvent_) throw ParameterError("MonotoneOp: empty resolvent");
}

BlockVector MonotoneOp::resolvent(double gamma, const BlockVector& w) const {
  if (!(gamma > 0.0)) {
    throw ParameterError("resolvent parameter must be positive, got " + std::to_string(gamma));
  }
  require_same_shape(w.shape(), shape_, "MonotoneOp::resolvent");
  return resolvent_(gamma, w);
}

GraphPoint resolve(const MonotoneOp& op, double gamma, const BlockVector& w) {
  BlockVector point = op.resolvent(gamma, w);
  BlockVector image = (1.0 / gamma) * (w - point);
  return {std::move(point), std::move(image)};
}

MonotoneOp shifted(const MonotoneOp& op, const BlockVector& z) {
  require_same_shape(z.shape(), op.shape(), "shifted");
  return MonotoneOp(op.shape(), [op, z](double gamma, const BlockVector& w) {
    BlockVector arg = w;
    arg.axpy(gamma, z);
    return op.resolvent(gamma, arg);
  });
}

MonotoneOp translated(const MonotoneOp& op, const BlockVector& r) {
  require_same_shape(r.shape(), op.shape(), "translated");
  return MonotoneOp(op.shape(), [op, r](double gamma, const BlockVector& w) {
    return r + op.resolvent(gamma, w - r);
  });
}

MonotoneOp product_op(const std::vector<MonotoneOp>& ops) {
  if (ops.empty()) throw ShapeError("product_op: empty operator list");
  Shape shape;
  std::vector<Shape> parts;
  for (const auto& op : ops) {
    shape = Shape::concat(shape, op.shape());
    parts.push_back(op.shape());
  }
  return MonotoneOp(shape, [ops, parts](double gamma, const BlockVector& w) {
    const auto ws = split_components(w, parts);
    std::vector<BlockVector> out;
    out.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) out.push_back(ops[i].resolvent(gamma, ws[i]));
    return BlockVector::concat(out);
  });
}

double firm_nonexpansiveness_defect(const MonotoneOp& op, int pairs, std::uint64_t seed,
                                    double spread) {
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < pairs; ++t) {
    const double gamma = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const BlockVector a = spread * rng.normal_block_vector(op.shape());
    const BlockVector b = spread * rng.normal_block_vector(op.shape());
    const BlockVector ja = op.resolvent(gamma, a);
    const BlockVector jb = op.resolvent(gamma, b);
    const BlockVector dj = ja - jb;
    worst = std::max(worst, squared_norm(dj) - inner(a - b, dj));
  }
  return worst;
}

namespace prox {

MonotoneOp zero(const Shape& shape) {
  return MonotoneOp(shape, [](double, const BlockVector& w) { return w; });
}

BlockVector soft_threshold(const BlockVector& w, double threshold) {
  BlockVector out = w;
  for (std::size_t i = 0; i < out.num_blocks(); ++i) {
    out.block(i) = w.block(i).unaryExpr([threshold](double v) {
      if (v > threshold) return v - threshold;
      if (v < -threshold) return v + threshold;
      return 0.0;
    });
  }
  return out;
}

MonotoneOp l1_norm(const Shape& shape, double weight) {
  if (!(weight >= 0.0)) throw ParameterError("l1_norm: weight must be nonnegative");
  return MonotoneOp(shape, [weight](double gamma, const BlockVector& w) {
    return soft_threshold(w, gamma * weight);
  });
}

MonotoneOp squared_l2(const Shape& shape, double weight) {
  if (!(weight >= 0.0)) throw ParameterError("squared_l2: weight must be nonnegative");
  return MonotoneOp(shape, [weight](double gamma, const BlockVector& w) {
    return (1.0 / (1.0 + gamma * weight)) * w;
  });
}

MonotoneOp box_indicator(const Shape& shape, double lo, double hi) {
  if (!(lo <= hi)) throw ParameterError("box_indicator: need lo <= hi");
  return MonotoneOp(shape, [lo, hi](double, const BlockVector& w) {
    BlockVector out = w;
    for (std::size_t i = 0; i < out.num_blocks(); ++i) {
      out.block(i) = w.block(i).cwiseMax(lo).cwiseMin(hi);
    }
    return out;
  });
}

MonotoneOp affine(Matrix M, Vector c) {
  if (M.rows() != M.cols() || M.rows() != c.size()) {
    throw ShapeError("affine: M must be square and match c");
  }
  const Matrix sym = 0.5 * (M + M.transpose());
  if (sym.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw ParameterError("affine: operator is not monotone (symmetric part has eigenvalue " +
                           std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
  }
  const Index n = M.rows();
  auto mat = std::make_shared<const Matrix>(std::move(M));
  auto off = std::make_shared<const Vector>(std::move(c));
  return MonotoneOp(Shape{n}, [mat, off, n](double gamma, const BlockVector& w) {
    const Matrix lhs = Matrix::Identity(n, n) + gamma * *mat;
    const Vector rhs = w.block(0) - gamma * *off;
    return BlockVector::single(lhs.partialPivLu().solve(rhs));
  });
}

}  // namespace prox

}  // namespace pdsplit
