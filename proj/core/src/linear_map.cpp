#include "pdsplit/linear_map.hpp"

#include "pdsplit/errors.hpp"
#include "pdsplit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace pdsplit {

LinearMap::LinearMap(Shape in_shape, Shape out_shape, Apply forward, Apply adjoint)
    : in_shape_(std::move(in_shape)),
      out_shape_(std::move(out_shape)),
      forward_(std::move(forward)),
      adjoint_(std::move(adjoint)) {
  if (!forward_ || !adjoint_) throw ParameterError("LinearMap: empty forward or adjoint");
}

BlockVector LinearMap::apply(const BlockVector& x) const {
  require_same_shape(x.shape(), in_shape_, "LinearMap::apply");
  return forward_(x);
}

BlockVector LinearMap::apply_adjoint(const BlockVector& y) const {
  require_same_shape(y.shape(), out_shape_, "LinearMap::apply_adjoint");
  return adjoint_(y);
}

LinearMap LinearMap::adjoint() const { return {out_shape_, in_shape_, adjoint_, forward_}; }

LinearMap LinearMap::identity(const Shape& shape) {
  auto id = [](const BlockVector& x) { return x; };
  return {shape, shape, id, id};
}

LinearMap LinearMap::zero(const Shape& in_shape, const Shape& out_shape) {
  return {in_shape, out_shape, [out_shape](const BlockVector&) { return BlockVector(out_shape); },
          [in_shape](const BlockVector&) { return BlockVector(in_shape); }};
}

LinearMap LinearMap::scaled_identity(const Shape& shape, double alpha) {
  auto scale = [alpha](const BlockVector& x) { return alpha * x; };
  return {shape, shape, scale, scale};
}

LinearMap LinearMap::dense(Matrix m) {
  Matrix t = m.transpose();
  return dense(std::move(m), std::move(t));
}

LinearMap LinearMap::dense(Matrix forward, Matrix adjoint) {
  if (adjoint.rows() != forward.cols() || adjoint.cols() != forward.rows()) {
    throw ShapeError("LinearMap::dense: adjoint matrix has the wrong dimensions");
  }
  Shape in{forward.cols()};
  Shape out{forward.rows()};
  auto fwd = std::make_shared<const Matrix>(std::move(forward));
  auto adj = std::make_shared<const Matrix>(std::move(adjoint));
  return {in, out,
          [fwd](const BlockVector& x) { return BlockVector::single(*fwd * x.block(0)); },
          [adj](const BlockVector& y) { return BlockVector::single(*adj * y.block(0)); }};
}

double check_adjoint(const LinearMap& map, int trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("check_adjoint: trials must be >= 1");
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const BlockVector x = rng.normal_block_vector(map.in_shape());
    const BlockVector y = rng.normal_block_vector(map.out_shape());
    const double lhs = inner(map.apply(x), y);
    const double rhs = inner(x, map.apply_adjoint(y));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

namespace {

Shape concat_all(const std::vector<Shape>& shapes) {
  Shape out;
  for (const auto& s : shapes) out = Shape::concat(out, s);
  return out;
}

}  // namespace

LinearMap block_matrix_map(const LinearMapGrid& grid, std::vector<Shape> in_shapes,
                           std::vector<Shape> out_shapes) {
  const std::size_t m = in_shapes.size();
  const std::size_t K = out_shapes.size();
  if (grid.size() != K) throw ShapeError("block_matrix_map: grid has wrong number of rows");
  for (std::size_t k = 0; k < K; ++k) {
    if (grid[k].size() != m) throw ShapeError("block_matrix_map: grid row has wrong length");
    for (std::size_t i = 0; i < m; ++i) {
      if (!grid[k][i]) continue;
      const std::string where =
          "block_matrix_map entry (" + std::to_string(k) + "," + std::to_string(i) + ")";
      require_same_shape(grid[k][i]->in_shape(), in_shapes[i], where.c_str());
      require_same_shape(grid[k][i]->out_shape(), out_shapes[k], where.c_str());
    }
  }

  auto entries = std::make_shared<const LinearMapGrid>(grid);
  auto ins = std::make_shared<const std::vector<Shape>>(std::move(in_shapes));
  auto outs = std::make_shared<const std::vector<Shape>>(std::move(out_shapes));

  auto forward = [entries, ins, outs](const BlockVector& x) {
    const auto xs = split_components(x, *ins);
    std::vector<BlockVector> ys;
    ys.reserve(outs->size());
    for (std::size_t k = 0; k < outs->size(); ++k) {
      BlockVector acc((*outs)[k]);
      for (std::size_t i = 0; i < ins->size(); ++i) {
        if (const auto& e = (*entries)[k][i]) acc += e->apply(xs[i]);
      }
      ys.push_back(std::move(acc));
    }
    return BlockVector::concat(ys);
  };
  auto adjoint = [entries, ins, outs](const BlockVector& y) {
    const auto ys = split_components(y, *outs);
    std::vector<BlockVector> xs;
    xs.reserve(ins->size());
    for (std::size_t i = 0; i < ins->size(); ++i) {
      BlockVector acc((*ins)[i]);
      for (std::size_t k = 0; k < outs->size(); ++k) {
        if (const auto& e = (*entries)[k][i]) acc += e->apply_adjoint(ys[k]);
      }
      xs.push_back(std::move(acc));
    }
    return BlockVector::concat(xs);
  };
  return {concat_all(*ins), concat_all(*outs), forward, adjoint};
}

LinearMap block_matrix_map(const LinearMapGrid& grid, std::size_t m, std::size_t K) {
  if (grid.size() != K) throw ShapeError("block_matrix_map: grid has wrong number of rows");
  std::vector<std::optional<Shape>> ins(m), outs(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (grid[k].size() != m) throw ShapeError("block_matrix_map: grid row has wrong length");
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = grid[k][i];
      if (!e) continue;
      if (ins[i] && !(*ins[i] == e->in_shape())) {
        throw ShapeError("block_matrix_map: inconsistent input shapes in column " +
                         std::to_string(i));
      }
      if (outs[k] && !(*outs[k] == e->out_shape())) {
        throw ShapeError("block_matrix_map: inconsistent output shapes in row " +
                         std::to_string(k));
      }
      ins[i] = e->in_shape();
      outs[k] = e->out_shape();
    }
  }
  std::vector<Shape> in_shapes, out_shapes;
  for (std::size_t i = 0; i < m; ++i) {
    if (!ins[i]) throw ShapeError("block_matrix_map: column " + std::to_string(i) + " is empty");
    in_shapes.push_back(*ins[i]);
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!outs[k]) throw ShapeError("block_matrix_map: row " + std::to_string(k) + " is empty");
    out_shapes.push_back(*outs[k]);
  }
  return block_matrix_map(grid, std::move(in_shapes), std::move(out_shapes));
}

}  // namespace pdsplit
