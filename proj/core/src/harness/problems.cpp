#include "pdsplit/harness/problems.hpp"

#include "pdsplit/errors.hpp"
#include "pdsplit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdsplit::harness {

namespace {

constexpr double kOracleTolerance = 1e-10;

/// Symmetric part G^T G / n + shift I, plus a skew part of size `skew`.
Matrix random_monotone_matrix(Rng& rng, Index n, double shift, double skew) {
  const Matrix G = rng.normal_matrix(n, n);
  const Matrix W = rng.normal_matrix(n, n);
  Matrix M = G.transpose() * G / static_cast<double>(n) + shift * Matrix::Identity(n, n);
  M += skew * 0.5 * (W - W.transpose()) / std::sqrt(static_cast<double>(n));
  return M;
}

Matrix random_with_norm(Rng& rng, Index rows, Index cols, double target) {
  Matrix G = rng.normal_matrix(rows, cols);
  const double top = Eigen::JacobiSVD<Matrix>(G).singularValues()(0);
  return G * (target / top);
}

Index positive_dim(Index d) {
  if (d < 1) throw ParameterError("generate: dimensions must be >= 1");
  return d;
}

AffineData random_affine(Rng& rng, Index n, Index k, const ProblemSpec& spec) {
  AffineData data;
  data.P = random_monotone_matrix(rng, n, spec.strong_shift, spec.skew_scale);
  data.c = rng.normal_vector(n);
  data.Q = random_monotone_matrix(rng, k, spec.strong_shift, spec.skew_scale);
  data.d = rng.normal_vector(k);
  data.L = random_with_norm(rng, k, n, spec.norm_scale);
  return data;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kAffinePd:
      return "affine_pd";
    case ProblemKind::kLasso:
      return "lasso";
    case ProblemKind::kConsensus:
      return "consensus";
    case ProblemKind::kSumTwo:
      return "sum_two";
    case ProblemKind::kNormfreeStress:
      return "normfree_stress";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (auto kind : {ProblemKind::kAffinePd, ProblemKind::kLasso, ProblemKind::kConsensus,
                    ProblemKind::kSumTwo, ProblemKind::kNormfreeStress}) {
    if (name == to_string(kind)) return kind;
  }
  throw ParameterError("unknown problem kind '" + std::string(name) + "'");
}

PDPoint affine_kt_point(const AffineData& data) {
  const Matrix K = data.P + data.L.transpose() * data.Q * data.L;
  const Vector rhs = -data.c - data.L.transpose() * data.d;
  const auto lu = K.partialPivLu();
  Vector x = lu.solve(rhs);
  x += lu.solve(rhs - K * x);
  const Vector v = data.Q * (data.L * x) + data.d;
  return {BlockVector::single(x), BlockVector::single(v)};
}

double lasso_objective(const Matrix& M, const Vector& y, double lambda, const Vector& x) {
  return lambda * x.lpNorm<1>() + 0.5 * (M * x - y).squaredNorm();
}

IstaResult ista_lasso(const Matrix& M, const Vector& y, double lambda, double tol,
                      std::size_t max_iters) {
  const double top = Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
  const double step = 1.0 / (top * top);
  IstaResult out;
  out.x = Vector::Zero(M.cols());
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    const Vector grad = M.transpose() * (M * out.x - y);
    const Vector w = out.x - step * grad;
    const double thr = step * lambda;
    const Vector next = w.unaryExpr([thr](double v) {
      return v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
    });
    const double change = (next - out.x).norm();
    out.x = next;
    if (change <= tol) break;
  }
  out.objective = lasso_objective(M, y, lambda, out.x);
  return out;
}

Vector polish_lasso(const Matrix& M, const Vector& y, double lambda, const Vector& x) {
  const double cut = 1e-8 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  std::vector<Index> support;
  for (Index j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) > cut) support.push_back(j);
  }
  Vector refined = Vector::Zero(x.size());
  if (!support.empty()) {
    const auto s = static_cast<Index>(support.size());
    Matrix Ms(M.rows(), s);
    Vector sign(s);
    for (Index j = 0; j < s; ++j) {
      Ms.col(j) = M.col(support[j]);
      sign[j] = x[support[j]] > 0 ? 1.0 : -1.0;
    }
    const Matrix G = Ms.transpose() * Ms;
    const Vector rhs = Ms.transpose() * y - lambda * sign;
    const auto lu = G.fullPivLu();
    if (!lu.isInvertible()) return x;
    Vector xs = lu.solve(rhs);
    xs += lu.solve(rhs - G * xs);
    for (Index j = 0; j < s; ++j) {
      if (xs[j] * sign[j] <= 0.0) return x;
      refined[support[j]] = xs[j];
    }
  }
  const Vector corr = M.transpose() * (y - M * refined);
  for (Index j = 0; j < x.size(); ++j) {
    if (refined[j] == 0.0 && std::abs(corr[j]) > lambda * (1.0 + 1e-9)) return x;
  }
  return refined;
}

SolveReport Instance::solve(const PDPoint& init, const SolverConfig& cfg) const {
  switch (spec_.kind) {
    case ProblemKind::kAffinePd:
    case ProblemKind::kNormfreeStress:
      return pdsplit::solve(*pd_, init, cfg);
    case ProblemKind::kSumTwo:
      return solve_sum(pd_->A(), pd_->B(), init, cfg);
    case ProblemKind::kConsensus:
      return coupled_solve(*coupled_, CoupledPoint::split(init, *coupled_), cfg);
    case ProblemKind::kLasso:
      return solve_min(*min_, CoupledPoint::split(init, min_->coupled()), cfg);
  }
  throw ParameterError("Instance::solve: unknown kind");
}

double Instance::kt_residual(const PDPoint& p) const {
  return pdsplit::kt_residual(p, pd_->A(), pd_->B(), pd_->L());
}

Instance generate(const ProblemSpec& spec) {
  if (spec.dims.empty()) throw ParameterError("generate: dims must be nonempty");
  for (Index d : spec.dims) positive_dim(d);
  if (!(spec.norm_scale > 0.0)) throw ParameterError("generate: norm_scale must be > 0");
  if (!(spec.strong_shift > 0.0)) throw ParameterError("generate: strong_shift must be > 0");
  if (!(spec.lambda_reg >= 0.0)) throw ParameterError("generate: lambda_reg must be >= 0");

  Rng rng(spec.seed);
  Instance inst;
  inst.spec_ = spec;

  switch (spec.kind) {
    case ProblemKind::kAffinePd:
    case ProblemKind::kNormfreeStress: {
      const Index n = spec.dims[0];
      const Index k = spec.dims.size() > 1 ? spec.dims[1] : n;
      AffineData data = random_affine(rng, n, k, spec);
      inst.pd_.emplace(prox::affine(data.P, data.c), prox::affine(data.Q, data.d),
                       LinearMap::dense(data.L), true);
      inst.oracle_ = affine_kt_point(data);
      inst.affine_ = std::move(data);
      break;
    }
    case ProblemKind::kSumTwo: {
      const Index n = spec.dims[0];
      AffineData data = random_affine(rng, n, n, spec);
      data.L = Matrix::Identity(n, n);
      inst.pd_.emplace(prox::affine(data.P, data.c), prox::affine(data.Q, data.d),
                       LinearMap::identity(Shape{n}));
      inst.oracle_ = affine_kt_point(data);
      inst.affine_ = std::move(data);
      break;
    }
    case ProblemKind::kConsensus: {
      const auto m = spec.dims.size();
      const Index d = spec.dims[0];
      for (Index di : spec.dims) {
        if (di != d) throw ParameterError("generate: consensus blocks must share a dimension");
      }
      std::vector<MonotoneOp> A;
      std::vector<BlockVector> z;
      LinearMapGrid grid(1);
      AffineData dense;
      const Index N = d * static_cast<Index>(m);
      dense.P = Matrix::Zero(N, N);
      dense.c = Vector::Zero(N);
      dense.L = Matrix::Zero(d, N);
      Matrix P0;
      Vector c0, z0;
      for (std::size_t i = 0; i < m; ++i) {
        Matrix P;
        Vector c, zi;
        if (i == 0 || !spec.identical_blocks) {
          P = random_monotone_matrix(rng, d, spec.strong_shift, spec.skew_scale);
          c = rng.normal_vector(d);
          zi = rng.normal_vector(d);
          if (i == 0) {
            P0 = P;
            c0 = c;
            z0 = zi;
          }
        } else {
          P = P0;
          c = c0;
          zi = z0;
        }
        const Index off = d * static_cast<Index>(i);
        dense.P.block(off, off, d, d) = P;
        dense.c.segment(off, d) = c - zi;
        dense.L.block(0, off, d, d) = Matrix::Identity(d, d);
        A.push_back(prox::affine(P, c));
        z.push_back(BlockVector::single(zi));
        grid[0].emplace_back(LinearMap::identity(Shape{d}));
      }
      const Matrix Q = random_monotone_matrix(rng, d, spec.strong_shift, spec.skew_scale);
      const Vector dq = rng.normal_vector(d);
      const Vector r = rng.normal_vector(d);
      dense.Q = Q;
      dense.d = dq - Q * r;
      inst.coupled_.emplace(std::move(A), std::vector<MonotoneOp>{prox::affine(Q, dq)},
                            std::move(z), std::vector<BlockVector>{BlockVector::single(r)},
                            std::move(grid), true);
      inst.pd_.emplace(reduce_to_pd(*inst.coupled_));
      PDPoint flat = affine_kt_point(dense);
      inst.oracle_ = PDPoint{
          BlockVector::unflatten(flat.x.block(0), Shape(std::vector<Index>(m, d))), flat.v};
      inst.affine_ = std::move(dense);
      break;
    }
    case ProblemKind::kLasso: {
      const Index features = spec.dims[0];
      const Index rows = spec.dims.size() > 1 ? spec.dims[1] : features;
      Matrix M = rng.normal_matrix(rows, features);
      Vector y = rng.normal_vector(rows);
      const Shape xs{features};
      const Shape ys{rows};
      LinearMapGrid grid(1);
      grid[0].emplace_back(LinearMap::dense(M));
      inst.min_.emplace(std::vector<ProxFunction>{functions::l1_norm(xs, spec.lambda_reg)},
                        std::vector<ProxFunction>{functions::squared_l2(ys)},
                        std::vector<BlockVector>{BlockVector(xs)},
                        std::vector<BlockVector>{BlockVector::single(y)}, std::move(grid));
      inst.pd_.emplace(reduce_to_pd(inst.min_->coupled()));
      const IstaResult ista = ista_lasso(M, y, spec.lambda_reg);
      inst.oracle_objective_ = ista.objective;
      const Vector x = polish_lasso(M, y, spec.lambda_reg, ista.x);
      inst.oracle_ = PDPoint{BlockVector::single(x), BlockVector::single(M * x - y)};
      inst.lasso_M_ = std::move(M);
      inst.lasso_y_ = std::move(y);
      break;
    }
  }

  if (inst.oracle_ && !(inst.kt_residual(*inst.oracle_) <= kOracleTolerance)) {
    throw NumericError("generate: oracle failed its self-check (residual " +
                           std::to_string(inst.kt_residual(*inst.oracle_)) + ")",
                       0);
  }
  return inst;
}

CoupledProblem random_coupled(std::uint64_t seed, std::size_t max_blocks, Index max_dim) {
  Rng rng(seed);
  const auto m = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(max_blocks)));
  const auto K = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(max_blocks)));
  std::vector<Index> pdims(m), ddims(K);
  for (auto& d : pdims) d = rng.integer(1, max_dim);
  for (auto& d : ddims) d = rng.integer(1, max_dim);

  std::vector<MonotoneOp> A;
  std::vector<BlockVector> z;
  for (std::size_t i = 0; i < m; ++i) {
    A.push_back(prox::affine(random_monotone_matrix(rng, pdims[i], 0.2, 0.5),
                             rng.normal_vector(pdims[i])));
    z.push_back(BlockVector::single(rng.normal_vector(pdims[i])));
  }
  std::vector<MonotoneOp> B;
  std::vector<BlockVector> r;
  for (std::size_t k = 0; k < K; ++k) {
    const Shape s{ddims[k]};
    switch (rng.integer(0, 3)) {
      case 0:
        B.push_back(prox::affine(random_monotone_matrix(rng, ddims[k], 0.2, 0.5),
                                 rng.normal_vector(ddims[k])));
        break;
      case 1:
        B.push_back(prox::l1_norm(s, rng.uniform(0.1, 1.0)));
        break;
      case 2:
        B.push_back(prox::box_indicator(s, -rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
        break;
      default:
        B.push_back(prox::squared_l2(s, rng.uniform(0.5, 2.0)));
        break;
    }
    r.push_back(BlockVector::single(rng.normal_vector(ddims[k])));
  }

  LinearMapGrid grid(K, std::vector<std::optional<LinearMap>>(m));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (rng.uniform() < 0.6) grid[k][i] = LinearMap::dense(rng.normal_matrix(ddims[k], pdims[i]));
    }
  }
  // Every row and column gets at least one entry.
  for (std::size_t k = 0; k < K; ++k) {
    const bool empty = std::none_of(grid[k].begin(), grid[k].end(),
                                    [](const auto& e) { return e.has_value(); });
    if (empty) {
      const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(m) - 1));
      grid[k][i] = LinearMap::dense(rng.normal_matrix(ddims[k], pdims[i]));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    bool empty = true;
    for (std::size_t k = 0; k < K; ++k) empty = empty && !grid[k][i];
    if (empty) {
      const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(K) - 1));
      grid[k][i] = LinearMap::dense(rng.normal_matrix(ddims[k], pdims[i]));
    }
  }
  return CoupledProblem(std::move(A), std::move(B), std::move(z), std::move(r), std::move(grid),
                        true);
}

}  // namespace pdsplit::harness
