#pragma once

#include "pdsplit/block_vector.hpp"

#include <cstdint>
#include <random>

namespace pdsplit {

/// Seeded generator used for every randomized routine in the library.
///
/// The bit stream is std::mt19937_64 (fully specified by the C++
/// standard). Uniform doubles take the top 53 bits of one draw; normals
/// use the Box-Muller transform on two uniforms. The distribution code
/// is written out here rather than taken from <random> because the
/// standard distributions are implementation-defined, and generated
/// problem instances have to be reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal.
  double normal();

  /// Integer uniform on [lo, hi] (inclusive), by rejection.
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  BlockVector normal_block_vector(const Shape& shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pdsplit
