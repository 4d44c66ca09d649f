#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pdsplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Per-block dimensions of a finite direct sum R^{d_1} + ... + R^{d_k}.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<Index> dims);
  explicit Shape(std::vector<Index> dims);

  std::size_t num_blocks() const { return dims_.size(); }
  Index block_dim(std::size_t i) const { return dims_[i]; }
  Index total_dim() const;
  std::span<const Index> dims() const { return dims_; }

  /// Blocks of `a` followed by the blocks of `b`.
  static Shape concat(const Shape& a, const Shape& b);

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Index> dims_;
};

/// Element of a direct sum of real coordinate spaces. The block layout
/// is fixed at construction; arithmetic between vectors with different
/// layouts throws ShapeError.
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(const Shape& shape);  // zero-filled
  explicit BlockVector(std::vector<Vector> blocks);
  BlockVector(std::initializer_list<std::initializer_list<double>> blocks);

  static BlockVector single(Vector v);
  static BlockVector scalar(double v);

  Shape shape() const;
  std::size_t num_blocks() const { return blocks_.size(); }
  const Vector& block(std::size_t i) const { return blocks_[i]; }
  Vector& block(std::size_t i) { return blocks_[i]; }
  std::span<const Vector> blocks() const { return blocks_; }

  /// Coordinates of all blocks laid end to end.
  Vector flatten() const;
  static BlockVector unflatten(const Vector& flat, const Shape& shape);

  /// Blocks [first, first+count) as a new vector.
  BlockVector slice(std::size_t first, std::size_t count) const;
  static BlockVector concat(std::span<const BlockVector> parts);

  bool all_finite() const;
  void set_zero();

  BlockVector& operator+=(const BlockVector& other);
  BlockVector& operator-=(const BlockVector& other);
  BlockVector& operator*=(double alpha);
  /// this += alpha * x
  BlockVector& axpy(double alpha, const BlockVector& x);

  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator*(double alpha, BlockVector a) { return a *= alpha; }
  friend BlockVector operator-(BlockVector a) { return a *= -1.0; }

  friend bool operator==(const BlockVector& a, const BlockVector& b);

 private:
  std::vector<Vector> blocks_;
};

/// Sum over blocks of the Euclidean inner products.
double inner(const BlockVector& a, const BlockVector& b);
double squared_norm(const BlockVector& a);
double norm(const BlockVector& a);

/// Splits a direct-sum vector into consecutive components with the given
/// layouts.
std::vector<BlockVector> split_components(const BlockVector& v, std::span<const Shape> shapes);

void require_same_shape(const Shape& a, const Shape& b, const char* context);

}  // namespace pdsplit
