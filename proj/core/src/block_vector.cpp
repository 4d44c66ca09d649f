#include "pdsplit/block_vector.hpp"

#include "pdsplit/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace pdsplit {

namespace {

std::string describe(const Shape& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.num_blocks(); ++i) {
    if (i) os << ',';
    os << s.block_dim(i);
  }
  os << ')';
  return os.str();
}

void check_pair(const BlockVector& a, const BlockVector& b, const char* context) {
  if (a.num_blocks() != b.num_blocks()) {
    require_same_shape(a.shape(), b.shape(), context);
  }
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i).size() != b.block(i).size()) {
      require_same_shape(a.shape(), b.shape(), context);
    }
  }
}

}  // namespace

Shape::Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  for (Index d : dims_) {
    if (d < 0) throw ShapeError("negative block dimension");
  }
}

Index Shape::total_dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), Index{0});
}

Shape Shape::concat(const Shape& a, const Shape& b) {
  std::vector<Index> dims(a.dims_);
  dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
  return Shape(std::move(dims));
}

void require_same_shape(const Shape& a, const Shape& b, const char* context) {
  if (!(a == b)) {
    throw ShapeError(std::string(context) + ": shape mismatch " + describe(a) + " vs " +
                     describe(b));
  }
}

BlockVector::BlockVector(const Shape& shape) {
  blocks_.reserve(shape.num_blocks());
  for (Index d : shape.dims()) blocks_.push_back(Vector::Zero(d));
}

BlockVector::BlockVector(std::vector<Vector> blocks) : blocks_(std::move(blocks)) {}

BlockVector::BlockVector(std::initializer_list<std::initializer_list<double>> blocks) {
  blocks_.reserve(blocks.size());
  for (const auto& b : blocks) {
    Vector v(static_cast<Index>(b.size()));
    Index i = 0;
    for (double x : b) v[i++] = x;
    blocks_.push_back(std::move(v));
  }
}

BlockVector BlockVector::single(Vector v) {
  std::vector<Vector> blocks;
  blocks.push_back(std::move(v));
  return BlockVector(std::move(blocks));
}

BlockVector BlockVector::scalar(double v) { return BlockVector{{v}}; }

Shape BlockVector::shape() const {
  std::vector<Index> dims;
  dims.reserve(blocks_.size());
  for (const auto& b : blocks_) dims.push_back(b.size());
  return Shape(std::move(dims));
}

Vector BlockVector::flatten() const {
  Index total = 0;
  for (const auto& b : blocks_) total += b.size();
  Vector out(total);
  Index off = 0;
  for (const auto& b : blocks_) {
    out.segment(off, b.size()) = b;
    off += b.size();
  }
  return out;
}

BlockVector BlockVector::unflatten(const Vector& flat, const Shape& shape) {
  if (flat.size() != shape.total_dim()) {
    throw ShapeError("unflatten: length " + std::to_string(flat.size()) +
                     " does not match shape " + describe(shape));
  }
  std::vector<Vector> blocks;
  blocks.reserve(shape.num_blocks());
  Index off = 0;
  for (Index d : shape.dims()) {
    blocks.emplace_back(flat.segment(off, d));
    off += d;
  }
  return BlockVector(std::move(blocks));
}

BlockVector BlockVector::slice(std::size_t first, std::size_t count) const {
  if (first + count > blocks_.size()) throw ShapeError("slice: block range out of bounds");
  return BlockVector(std::vector<Vector>(blocks_.begin() + static_cast<std::ptrdiff_t>(first),
                                         blocks_.begin() +
                                             static_cast<std::ptrdiff_t>(first + count)));
}

BlockVector BlockVector::concat(std::span<const BlockVector> parts) {
  std::vector<Vector> blocks;
  for (const auto& p : parts) {
    blocks.insert(blocks.end(), p.blocks_.begin(), p.blocks_.end());
  }
  return BlockVector(std::move(blocks));
}

bool BlockVector::all_finite() const {
  for (const auto& b : blocks_) {
    if (!b.allFinite()) return false;
  }
  return true;
}

void BlockVector::set_zero() {
  for (auto& b : blocks_) b.setZero();
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  check_pair(*this, other, "add");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& other) {
  check_pair(*this, other, "subtract");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

BlockVector& BlockVector::operator*=(double alpha) {
  for (auto& b : blocks_) b *= alpha;
  return *this;
}

BlockVector& BlockVector::axpy(double alpha, const BlockVector& x) {
  check_pair(*this, x, "axpy");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += alpha * x.blocks_[i];
  return *this;
}

bool operator==(const BlockVector& a, const BlockVector& b) {
  if (a.num_blocks() != b.num_blocks()) return false;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i).size() != b.block(i).size()) return false;
    if (a.block(i) != b.block(i)) return false;
  }
  return true;
}

double inner(const BlockVector& a, const BlockVector& b) {
  check_pair(a, b, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) s += a.block(i).dot(b.block(i));
  return s;
}

double squared_norm(const BlockVector& a) {
  double s = 0.0;
  for (const auto& b : a.blocks()) s += b.squaredNorm();
  return s;
}

double norm(const BlockVector& a) { return std::sqrt(squared_norm(a)); }

std::vector<BlockVector> split_components(const BlockVector& v, std::span<const Shape> shapes) {
  std::vector<BlockVector> parts;
  parts.reserve(shapes.size());
  std::size_t first = 0;
  for (const auto& s : shapes) {
    parts.push_back(v.slice(first, s.num_blocks()));
    require_same_shape(parts.back().shape(), s, "split_components");
    first += s.num_blocks();
  }
  if (first != v.num_blocks()) throw ShapeError("split_components: leftover blocks");
  return parts;
}

}  // namespace pdsplit
