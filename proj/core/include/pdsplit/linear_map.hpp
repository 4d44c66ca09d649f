#pragma once

#include "pdsplit/block_vector.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace pdsplit {

/// Bounded linear operator known only through its forward and adjoint
/// actions. There is deliberately no way to ask a LinearMap for its norm
/// or its inverse: the solvers never need either.
class LinearMap {
 public:
  using Apply = std::function<BlockVector(const BlockVector&)>;

  LinearMap(Shape in_shape, Shape out_shape, Apply forward, Apply adjoint);

  const Shape& in_shape() const { return in_shape_; }
  const Shape& out_shape() const { return out_shape_; }

  /// L x. Throws ShapeError if x does not have in_shape().
  BlockVector apply(const BlockVector& x) const;
  /// L* y. Throws ShapeError if y does not have out_shape().
  BlockVector apply_adjoint(const BlockVector& y) const;

  /// The map L* with forward and adjoint swapped.
  LinearMap adjoint() const;

  static LinearMap identity(const Shape& shape);
  static LinearMap zero(const Shape& in_shape, const Shape& out_shape);
  static LinearMap scaled_identity(const Shape& shape, double alpha);
  /// Single-block dense matrix; the adjoint is the transpose.
  static LinearMap dense(Matrix m);
  /// Single-block dense matrix with a caller-supplied adjoint matrix.
  /// Used to build deliberately inconsistent pairs in tests.
  static LinearMap dense(Matrix forward, Matrix adjoint);

 private:
  Shape in_shape_;
  Shape out_shape_;
  Apply forward_;
  Apply adjoint_;
};

/// max over sampled (x, y) of |<Lx,y> - <x,L*y>| / (1 + |<Lx,y>|).
/// Samples are standard normal; deterministic for a given seed.
double check_adjoint(const LinearMap& map, int trials, std::uint64_t seed);

/// Grid of optional entries, indexed grid[k][i] for output block-group k
/// and input block-group i.
using LinearMapGrid = std::vector<std::vector<std::optional<LinearMap>>>;

/// (x_i)_i -> (sum_i L_ki x_i)_k, with adjoint (y_k)_k -> (sum_k L_ki* y_k)_i.
/// Missing entries are zero maps. Component i of the input occupies the
/// blocks of in_shapes[i]; the product shape is their concatenation, and
/// likewise for the output.
LinearMap block_matrix_map(const LinearMapGrid& grid, std::vector<Shape> in_shapes,
                           std::vector<Shape> out_shapes);

/// Same, inferring component shapes from the present entries. Every row
/// and column must contain at least one entry.
LinearMap block_matrix_map(const LinearMapGrid& grid, std::size_t m, std::size_t K);

}  // namespace pdsplit
