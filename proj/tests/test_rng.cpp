#include "pdsplit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace pdsplit {
namespace {

TEST(Rng, BitStreamIsMt19937_64) {
  Rng rng(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.next_u64(), ref());
}

TEST(Rng, UniformUsesTop53Bits) {
  Rng rng(7);
  std::mt19937_64 ref(7);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform();
    EXPECT_EQ(u, static_cast<double>(ref() >> 11) * 0x1.0p-53);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMomentsAreSane) {
  Rng rng(1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.02);
}

TEST(Rng, IntegerStaysInRange) {
  Rng rng(3);
  int seen[5] = {};
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.integer(2, 6);
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 6);
    ++seen[k - 2];
  }
  for (int c : seen) EXPECT_GT(c, 100);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99);
  EXPECT_EQ(a.normal_matrix(3, 4), b.normal_matrix(3, 4));
  EXPECT_EQ(a.normal_block_vector(Shape{2, 1}), b.normal_block_vector(Shape{2, 1}));
}

}  // namespace
}  // namespace pdsplit
