#include "pdsplit/block_vector.hpp"
#include "pdsplit/errors.hpp"

#include <gtest/gtest.h>

namespace pdsplit {
namespace {

TEST(BlockVector, InnerProductSumsOverBlocks) {
  const BlockVector a{{1, 2}, {3}};
  const BlockVector b{{0, 1}, {2}};
  EXPECT_DOUBLE_EQ(inner(a, b), 8.0);
}

TEST(BlockVector, NormSquaredIdentity) {
  const BlockVector a{{3, 4}};
  EXPECT_DOUBLE_EQ(inner(a, a), 25.0);
  EXPECT_DOUBLE_EQ(squared_norm(a), 25.0);
  EXPECT_DOUBLE_EQ(norm(a), 5.0);
}

TEST(BlockVector, ShapeMismatchIsStructuralError) {
  const BlockVector a{{1, 2}, {3}};
  const BlockVector b{{1}, {2, 3}};
  EXPECT_THROW(inner(a, b), ShapeError);
  EXPECT_THROW(BlockVector(a) += b, ShapeError);
}

TEST(BlockVector, FlattenRoundTrip) {
  const BlockVector a{{1, 2}, {3}, {4, 5, 6}};
  const Vector flat = a.flatten();
  ASSERT_EQ(flat.size(), 6);
  EXPECT_EQ(flat[3], 4.0);
  EXPECT_EQ(BlockVector::unflatten(flat, a.shape()), a);
}

TEST(BlockVector, SliceAndConcat) {
  const BlockVector a{{1}, {2, 3}, {4}};
  const BlockVector head = a.slice(0, 1);
  const BlockVector tail = a.slice(1, 2);
  EXPECT_EQ(head, (BlockVector{{1}}));
  const BlockVector parts[] = {head, tail};
  EXPECT_EQ(BlockVector::concat(parts), a);
  EXPECT_THROW(a.slice(2, 2), ShapeError);
}

TEST(BlockVector, ArithmeticAndAxpy) {
  BlockVector a{{1, 2}, {3}};
  const BlockVector b{{1, 1}, {1}};
  a.axpy(2.0, b);
  EXPECT_EQ(a, (BlockVector{{3, 4}, {5}}));
  EXPECT_EQ(a - b, (BlockVector{{2, 3}, {4}}));
  EXPECT_EQ(0.5 * b, (BlockVector{{0.5, 0.5}, {0.5}}));
  EXPECT_EQ(-b, (BlockVector{{-1, -1}, {-1}}));
}

TEST(BlockVector, ZerosFromShape) {
  const Shape s{2, 3};
  const BlockVector z(s);
  EXPECT_EQ(z.shape(), s);
  EXPECT_EQ(s.total_dim(), 5);
  EXPECT_DOUBLE_EQ(norm(z), 0.0);
}

TEST(BlockVector, FiniteCheck) {
  BlockVector a{{1, 2}};
  EXPECT_TRUE(a.all_finite());
  a.block(0)[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(a.all_finite());
}

TEST(BlockVector, SplitComponents) {
  const BlockVector v{{1}, {2, 3}, {4}};
  const std::vector<Shape> shapes{Shape{1, 2}, Shape{1}};
  const auto parts = split_components(v, shapes);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], (BlockVector{{1}, {2, 3}}));
  EXPECT_EQ(parts[1], (BlockVector{{4}}));
  const std::vector<Shape> wrong{Shape{1}};
  EXPECT_THROW(split_components(v, wrong), ShapeError);
}

TEST(Shape, ConcatAndEquality) {
  EXPECT_EQ(Shape::concat(Shape{1, 2}, Shape{3}), (Shape{1, 2, 3}));
  EXPECT_NE(Shape{1}, (Shape{2}));
}

}  // namespace
}  // namespace pdsplit
