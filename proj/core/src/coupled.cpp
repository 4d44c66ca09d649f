#include "pdsplit/coupled.hpp"

#include "driver.hpp"
#include "pdsplit/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pdsplit {

namespace {

void require_finite(const BlockVector& v, const char* what, std::size_t iteration) {
  if (!v.all_finite()) throw NumericError(std::string("non-finite ") + what, iteration);
}

double sum_squared_norms(const std::vector<BlockVector>& vs) {
  double s = 0.0;
  for (const auto& v : vs) s += squared_norm(v);
  return s;
}

}  // namespace

CoupledProblem::CoupledProblem(std::vector<MonotoneOp> A, std::vector<MonotoneOp> B,
                               std::vector<BlockVector> z, std::vector<BlockVector> r,
                               LinearMapGrid grid, bool strict)
    : A_(std::move(A)), B_(std::move(B)), z_(std::move(z)), r_(std::move(r)),
      grid_(std::move(grid)) {
  if (A_.empty() || B_.empty()) throw ShapeError("CoupledProblem: need m >= 1 and K >= 1");
  if (z_.size() != A_.size()) throw ShapeError("CoupledProblem: z must have m entries");
  if (r_.size() != B_.size()) throw ShapeError("CoupledProblem: r must have K entries");
  if (grid_.size() != B_.size()) throw ShapeError("CoupledProblem: grid must have K rows");
  for (std::size_t i = 0; i < A_.size(); ++i) {
    require_same_shape(z_[i].shape(), A_[i].shape(), "CoupledProblem z_i");
  }
  for (std::size_t k = 0; k < B_.size(); ++k) {
    require_same_shape(r_[k].shape(), B_[k].shape(), "CoupledProblem r_k");
    if (grid_[k].size() != A_.size()) throw ShapeError("CoupledProblem: grid rows need m entries");
    for (std::size_t i = 0; i < A_.size(); ++i) {
      const auto& e = grid_[k][i];
      if (!e) continue;
      const std::string where = "CoupledProblem L(" + std::to_string(k) + "," +
                                std::to_string(i) + ")";
      require_same_shape(e->in_shape(), A_[i].shape(), where.c_str());
      require_same_shape(e->out_shape(), B_[k].shape(), where.c_str());
      if (strict && check_adjoint(*e, 8, 0x5eed + 31 * k + i) > 1e-8) {
        throw ParameterError(where + ": adjoint defect exceeds tolerance");
      }
    }
  }
}

std::vector<Shape> CoupledProblem::primal_shapes() const {
  std::vector<Shape> out;
  for (const auto& a : A_) out.push_back(a.shape());
  return out;
}

std::vector<Shape> CoupledProblem::dual_shapes() const {
  std::vector<Shape> out;
  for (const auto& b : B_) out.push_back(b.shape());
  return out;
}

std::vector<BlockVector> CoupledProblem::apply_grid(const std::vector<BlockVector>& x) const {
  std::vector<BlockVector> out;
  out.reserve(K());
  for (std::size_t k = 0; k < K(); ++k) {
    BlockVector acc(B_[k].shape());
    for (std::size_t i = 0; i < m(); ++i) {
      if (const auto& e = grid_[k][i]) acc += e->apply(x[i]);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<BlockVector> CoupledProblem::apply_grid_adjoint(
    const std::vector<BlockVector>& v) const {
  std::vector<BlockVector> out;
  out.reserve(m());
  for (std::size_t i = 0; i < m(); ++i) {
    BlockVector acc(A_[i].shape());
    for (std::size_t k = 0; k < K(); ++k) {
      if (const auto& e = grid_[k][i]) acc += e->apply_adjoint(v[k]);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

PDPoint CoupledPoint::concat() const {
  return {BlockVector::concat(x), BlockVector::concat(v)};
}

CoupledPoint CoupledPoint::split(const PDPoint& p, const CoupledProblem& cp) {
  const auto ps = cp.primal_shapes();
  const auto ds = cp.dual_shapes();
  return {split_components(p.x, ps), split_components(p.v, ds)};
}

CoupledPoint CoupledPoint::zeros(const CoupledProblem& cp) {
  CoupledPoint p;
  for (const auto& a : cp.A()) p.x.emplace_back(a.shape());
  for (const auto& b : cp.B()) p.v.emplace_back(b.shape());
  return p;
}

PDProblem reduce_to_pd(const CoupledProblem& cp) {
  std::vector<MonotoneOp> as, bs;
  for (std::size_t i = 0; i < cp.m(); ++i) as.push_back(shifted(cp.A()[i], cp.z()[i]));
  for (std::size_t k = 0; k < cp.K(); ++k) bs.push_back(translated(cp.B()[k], cp.r()[k]));
  return PDProblem(product_op(as), product_op(bs),
                   block_matrix_map(cp.grid(), cp.primal_shapes(), cp.dual_shapes()));
}

CoupledResiduals coupled_kt_residuals(const CoupledProblem& cp, const CoupledPoint& p) {
  CoupledResiduals res;
  const auto Lstar_v = cp.apply_grid_adjoint(p.v);
  const auto l = cp.apply_grid(p.x);
  double total2 = 0.0;
  for (std::size_t i = 0; i < cp.m(); ++i) {
    const BlockVector arg = p.x[i] + cp.z()[i] - Lstar_v[i];
    const double r = norm(p.x[i] - cp.A()[i].resolvent(1.0, arg));
    res.primal.push_back(r);
    total2 += r * r;
  }
  for (std::size_t k = 0; k < cp.K(); ++k) {
    const BlockVector b = cp.r()[k] + cp.B()[k].resolvent(1.0, l[k] + p.v[k] - cp.r()[k]);
    const double r = norm(l[k] - b);
    res.dual.push_back(r);
    total2 += r * r;
  }
  res.total = std::sqrt(total2);
  return res;
}

StepResult coupled_step(const CoupledProblem& cp, const CoupledPoint& p, double gamma, double mu,
                        double lambda, double sigma_tol, std::size_t iteration) {
  if (!(gamma > 0.0) || !(mu > 0.0)) throw ParameterError("coupled_step: gamma, mu must be > 0");
  if (!(lambda > 0.0 && lambda < 2.0)) throw ParameterError("coupled_step: lambda not in ]0,2[");
  const std::size_t m = cp.m();
  const std::size_t K = cp.K();

  const auto Lstar_v = cp.apply_grid_adjoint(p.v);
  std::vector<BlockVector> a(m), a_img(m);
  double wa2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    BlockVector arg = p.x[i];
    arg.axpy(gamma, cp.z()[i] - Lstar_v[i]);
    a[i] = cp.A()[i].resolvent(gamma, arg);
    require_finite(a[i], "resolvent of A_i", iteration);
    // Certificate for the shifted operator -z_i + A_i.
    BlockVector w = p.x[i];
    w.axpy(-gamma, Lstar_v[i]);
    a_img[i] = (1.0 / gamma) * (w - a[i]);
    wa2 += squared_norm(w);
  }

  const auto l = cp.apply_grid(p.x);
  const auto La = cp.apply_grid(a);
  std::vector<BlockVector> b(K), b_img(K), t(K), l_minus_b(K);
  double wb2 = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    BlockVector arg = l[k];
    arg.axpy(mu, p.v[k]);
    b[k] = cp.r()[k] + cp.B()[k].resolvent(mu, arg - cp.r()[k]);
    require_finite(b[k], "resolvent of B_k", iteration);
    b_img[k] = (1.0 / mu) * (arg - b[k]);
    wb2 += squared_norm(arg);
    t[k] = b[k] - La[k];
    l_minus_b[k] = l[k] - b[k];
  }

  const auto Lstar_lb = cp.apply_grid_adjoint(l_minus_b);
  std::vector<BlockVector> s(m), x_minus_a(m);
  for (std::size_t i = 0; i < m; ++i) {
    x_minus_a[i] = p.x[i] - a[i];
    s[i] = (1.0 / gamma) * x_minus_a[i];
    s[i].axpy(1.0 / mu, Lstar_lb[i]);
  }

  StepResult out;
  StepDiag& d = out.diag;
  d.gamma = gamma;
  d.mu = mu;
  d.lambda = lambda;
  d.s_norm2 = sum_squared_norms(s);
  d.t_norm2 = sum_squared_norms(t);
  d.tau = d.s_norm2 + d.t_norm2;
  const double xa2 = sum_squared_norms(x_minus_a);
  const double lb2 = sum_squared_norms(l_minus_b);
  d.x_gap = std::sqrt(xa2);
  d.l_gap = std::sqrt(lb2);
  d.numerator = xa2 / gamma + lb2 / mu;
  if (!std::isfinite(d.tau) || !std::isfinite(d.numerator)) {
    throw NumericError("non-finite step quantities", iteration);
  }

  const PDPoint current = p.concat();
  const double magnitude = 1.0 + norm(current) + (1.0 + 1.0 / gamma) * std::sqrt(wa2) +
                           (1.0 + 1.0 / mu) * std::sqrt(wb2) + std::sqrt(sum_squared_norms(Lstar_v)) +
                           std::sqrt(sum_squared_norms(l)) + std::sqrt(sum_squared_norms(La));
  if (detail::below_sigma_floor(d.tau, sigma_tol, magnitude)) {
    std::vector<BlockVector> v_bar(K);
    for (std::size_t k = 0; k < K; ++k) {
      v_bar[k] = p.v[k];
      v_bar[k].axpy(1.0 / mu, l_minus_b[k]);
    }
    out.terminated = true;
    out.solution = PDPoint{BlockVector::concat(a), BlockVector::concat(v_bar)};
    out.next = current;
  } else {
    d.delta = d.numerator / std::sqrt(d.tau);
    d.theta = lambda * d.numerator / d.tau;
    std::vector<BlockVector> x_next(m), v_next(K);
    for (std::size_t i = 0; i < m; ++i) {
      x_next[i] = p.x[i];
      x_next[i].axpy(-d.theta, s[i]);
    }
    for (std::size_t k = 0; k < K; ++k) {
      v_next[k] = p.v[k];
      v_next[k].axpy(-d.theta, t[k]);
    }
    out.next = PDPoint{BlockVector::concat(x_next), BlockVector::concat(v_next)};
    require_finite(out.next.x, "primal iterate", iteration);
    require_finite(out.next.v, "dual iterate", iteration);
  }
  out.a = GraphPoint{BlockVector::concat(a), BlockVector::concat(a_img)};
  out.b = GraphPoint{BlockVector::concat(b), BlockVector::concat(b_img)};
  return out;
}

SolveReport coupled_solve(const CoupledProblem& cp, const CoupledPoint& init,
                          const SolverConfig& cfg) {
  const PDProblem reduced = reduce_to_pd(cp);
  return detail::drive(reduced, init.concat(), cfg,
                       [&](const PDPoint& p, std::size_t n, double tol) {
                         const double gamma = cfg.gamma(n);
                         const double mu = cfg.mu(n);
                         const double lambda = cfg.lambda(n);
                         const double eps = cfg.epsilon;
                         if (gamma < eps || gamma > 1.0 / eps || mu < eps || mu > 1.0 / eps ||
                             lambda < eps || lambda > 2.0 - eps) {
                           throw ParameterError("schedule out of range at iteration " +
                                                std::to_string(n));
                         }
                         return coupled_step(cp, CoupledPoint::split(p, cp), gamma, mu, lambda,
                                             tol, n);
                       });
}

namespace functions {

ProxFunction zero(const Shape& shape) {
  return {prox::zero(shape), [](const BlockVector&) { return 0.0; }};
}

ProxFunction l1_norm(const Shape& shape, double weight) {
  return {prox::l1_norm(shape, weight), [weight](const BlockVector& x) {
            double s = 0.0;
            for (const auto& b : x.blocks()) s += b.lpNorm<1>();
            return weight * s;
          }};
}

ProxFunction squared_l2(const Shape& shape, double weight) {
  return {prox::squared_l2(shape, weight),
          [weight](const BlockVector& x) { return 0.5 * weight * squared_norm(x); }};
}

ProxFunction box_indicator(const Shape& shape, double lo, double hi) {
  return {prox::box_indicator(shape, lo, hi), [lo, hi](const BlockVector& x) {
            for (const auto& b : x.blocks()) {
              if (b.size() > 0 && (b.minCoeff() < lo || b.maxCoeff() > hi)) {
                return std::numeric_limits<double>::infinity();
              }
            }
            return 0.0;
          }};
}

}  // namespace functions

namespace {

std::vector<MonotoneOp> subdifferentials(const std::vector<ProxFunction>& fs) {
  std::vector<MonotoneOp> out;
  for (const auto& f : fs) out.push_back(f.subdifferential);
  return out;
}

}  // namespace

MinProblem::MinProblem(std::vector<ProxFunction> f, std::vector<ProxFunction> g,
                       std::vector<BlockVector> z, std::vector<BlockVector> r, LinearMapGrid grid)
    : f_(std::move(f)),
      g_(std::move(g)),
      coupled_(subdifferentials(f_), subdifferentials(g_), std::move(z), std::move(r),
               std::move(grid)) {}

bool MinProblem::has_objective() const {
  for (const auto& f : f_) {
    if (!f.value) return false;
  }
  for (const auto& g : g_) {
    if (!g.value) return false;
  }
  return true;
}

double MinProblem::objective(const std::vector<BlockVector>& x) const {
  if (!has_objective()) throw ParameterError("MinProblem: missing function evaluators");
  double total = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    total += f_[i].value(x[i]) - inner(x[i], coupled_.z()[i]);
  }
  const auto l = coupled_.apply_grid(x);
  for (std::size_t k = 0; k < g_.size(); ++k) total += g_[k].value(l[k] - coupled_.r()[k]);
  return total;
}

SolveReport solve_min(const MinProblem& mp, const CoupledPoint& init, const SolverConfig& cfg) {
  if (!mp.has_objective()) return coupled_solve(mp.coupled(), init, cfg);
  std::vector<double> objective{mp.objective(init.x)};
  SolverConfig wrapped = cfg;
  wrapped.observer = [&](const IterationEvent& ev) {
    const auto parts = CoupledPoint::split(ev.after, mp.coupled());
    objective.push_back(mp.objective(parts.x));
    if (cfg.observer) cfg.observer(ev);
  };
  SolveReport report = coupled_solve(mp.coupled(), init, wrapped);
  report.objective = std::move(objective);
  return report;
}

}  // namespace pdsplit
