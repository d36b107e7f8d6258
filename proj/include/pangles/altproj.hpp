#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pangles/angles.hpp"

namespace pangles {

/// Which homogeneous equation A e = 0 is solved.
///   Multiplicative: A = (I - P_F P_G)|_F, realized on F coordinates.
///   Additive:       A = P_{F⊥} + P_{G⊥}, realized on metric coordinates.
enum class Variant { Multiplicative, Additive };
enum class Method { Richardson, CG };
/// CG update of the search direction: beta = γ/γ_old, or the variant
/// (r - r_old, r)/(r_old, r_old) that tolerates inexact applications of A.
enum class BetaRule { Standard, Recommended };

inline std::string to_string(Variant v) { return v == Variant::Multiplicative ? "mult" : "add"; }
inline std::string to_string(Method m) { return m == Method::CG ? "cg" : "richardson"; }

using LinearOp = std::function<Vector(const Vector&)>;
/// Called with every iterate, starting with e0.
using Observer = std::function<void(const Vector&)>;

struct AltProblem {
  Variant variant = Variant::Multiplicative;
  Subspace F;
  Subspace G;
  /// Start vector in original coordinates; must lie in F for Multiplicative.
  Vector e0;
};

struct SolveTrace {
  /// (e_k, A e_k) for k = 0, 1, ...
  std::vector<double> energy;
  /// ||A e_k|| (the residual of A e = 0) for k = 0, 1, ...
  std::vector<double> residual_norms;
  /// First k with ||r_k|| <= tol ||r_0||; absent when not reached.
  std::optional<int> iterations_to_tol;
  int iterations = 0;
  /// Final iterate in original coordinates.
  Vector limit_vector;
  /// (p, A p) fell to numerical zero before the relative test fired;
  /// iteration halted and counted as converged at that step.
  bool breakdown = false;
  /// Multiplicative only: max_k | ||P_{G⊥} e_k||^2 - (e_k, A e_k) | / ||e_k||^2.
  /// Squared form: the square root of a near-zero energy only carries
  /// about half the digits.
  std::optional<double> energy_identity_residual;
  /// CG only: max_k (energy_CG[k] - energy_Richardson[k]) from the same e0.
  std::optional<double> optimality_excess;
  /// alternating_iterate only: ||e_k - P_{F∩G} e0||.
  std::optional<double> limit_error;
};

namespace detail {

/// Coordinates in which the solvers run, and the maps in and out.
struct Realized {
  LinearOp apply;
  Index dim = 0;
  Vector x0;
  std::function<Vector(const Vector&)> to_original;
  /// Multiplicative only: ||P_{G⊥} e|| of the iterate.
  std::function<double(const Vector&)> gperp_norm;
  double richardson_step = 1.0;
};

inline void require_in(const Subspace& F, const Vector& x_metric, double tol, const char* what) {
  const Matrix& Q = F.metric_basis();
  const double dev = (x_metric - Q * (Q.transpose() * x_metric)).norm();
  if (dev > tol * std::max(1.0, x_metric.norm())) throw Error(ErrorCode::StartNotInF, what);
}

inline Realized realize(const AltProblem& p) {
  require_same_space(p.F, p.G);
  if (p.e0.size() != p.F.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "start vector has wrong length");
  const auto& ip = p.F.inner_product();
  const Vector e0m = ip->to_metric(p.e0);
  const Matrix QF = p.F.metric_basis();
  const Matrix QG = p.G.metric_basis();
  Realized r;
  if (p.variant == Variant::Multiplicative) {
    require_nontrivial(p.F, "first subspace");
    require_in(p.F, e0m, 1e-10, "start vector is not in F");
    const Matrix C = QF.transpose() * QG;
    r.apply = [C](const Vector& y) -> Vector { return y - C * (C.transpose() * y); };
    r.dim = QF.cols();
    r.x0 = QF.transpose() * e0m;
    r.to_original = [QF, ip](const Vector& y) -> Vector { return ip->from_metric(QF * y); };
    r.gperp_norm = [QF, QG](const Vector& y) {
      const Vector e = QF * y;
      return (e - QG * (QG.transpose() * e)).norm();
    };
    r.richardson_step = 1.0;
  } else {
    const Matrix PFp = Matrix::Identity(QF.rows(), QF.rows()) - QF * QF.transpose();
    const Matrix PGp = Matrix::Identity(QG.rows(), QG.rows()) - QG * QG.transpose();
    const Matrix A = PFp + PGp;
    r.apply = [A](const Vector& x) -> Vector { return A * x; };
    r.dim = QF.rows();
    r.x0 = e0m;
    r.to_original = [ip](const Vector& x) -> Vector { return ip->from_metric(x); };
    // Σ(A) ⊆ [0, 2]
    r.richardson_step = 0.5;
  }
  return r;
}

inline void mark_tolerance(SolveTrace& t, double tol) {
  const double r0 = t.residual_norms.front();
  for (std::size_t k = 0; k < t.residual_norms.size(); ++k)
    if (t.residual_norms[k] <= tol * r0) {
      t.iterations_to_tol = static_cast<int>(k);
      return;
    }
}

}  // namespace detail

/// e_{k+1} = P_F P_G e_k from e0 ∈ F, k steps. The limit is compared with
/// the orthogonal projection of e0 onto F ∩ G.
inline SolveTrace alternating_iterate(const Subspace& F, const Subspace& G, const Vector& e0, int k) {
  require_same_space(F, G);
  require_nontrivial(F, "first subspace");
  if (e0.size() != F.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "start vector has wrong length");
  const auto& ip = F.inner_product();
  Vector e = ip->to_metric(e0);
  detail::require_in(F, e, 1e-10, "start vector is not in F");
  const Matrix& QF = F.metric_basis();
  const Matrix& QG = G.metric_basis();
  auto step = [&](const Vector& x) -> Vector { return QF * (QF.transpose() * (QG * (QG.transpose() * x))); };

  SolveTrace t;
  const Vector start = e;
  for (int i = 0;; ++i) {
    const Vector pg = QG * (QG.transpose() * e);
    t.energy.push_back((e - pg).squaredNorm());
    const Vector next = step(e);
    t.residual_norms.push_back((e - next).norm());
    if (i == k) break;
    e = next;
  }
  t.iterations = k;
  t.limit_vector = ip->from_metric(e);
  const Subspace M00 = intersect(F, G);
  const Vector target = M00.is_trivial() ? Vector::Zero(e.size()) : Vector(metric_projector(M00) * start);
  t.limit_error = (e - target).norm();
  return t;
}

/// CG on A e = 0 (b = 0) from e0, with q = A p kept separate from the
/// residual. Stops when ||A x|| <= tol ||A e0|| or after max_iter iterations.
inline SolveTrace cg_null_space(const LinearOp& apply_A, const Vector& e0, double tol, int max_iter,
                                BetaRule rule = BetaRule::Recommended, const Observer& observe = {}) {
  if (!(e0.norm() > 0.0)) throw Error(ErrorCode::ZeroVector, "CG start vector is zero");
  SolveTrace t;
  Vector x = e0;
  Vector r = -apply_A(x);
  Vector r_old;
  Vector p;
  double gamma = 1.0;
  const double r0 = r.norm();
  t.energy.push_back(std::max(-x.dot(r), 0.0));
  t.residual_norms.push_back(r0);
  if (observe) observe(x);
  if (r0 == 0.0) {
    t.iterations_to_tol = 0;
    t.limit_vector = x;
    return t;
  }
  double res = r0;
  for (int k = 0; k < max_iter; ++k) {
    if (res <= tol * r0) break;
    const double gamma_old = gamma;
    gamma = r.dot(r);
    if (k == 0) {
      p = r;
    } else {
      const double beta = rule == BetaRule::Standard ? gamma / gamma_old : (r - r_old).dot(r) / r_old.dot(r_old);
      p = r + beta * p;
    }
    const Vector q = apply_A(p);
    const double pq = q.dot(p);
    if (!(pq > 1e-16 * p.norm() * q.norm())) {
      t.breakdown = true;
      break;
    }
    const double alpha = gamma / pq;
    x += alpha * p;
    r_old = r;
    r -= alpha * q;
    // Reported residual and energy use A x itself, not the recursion.
    const Vector ax = apply_A(x);
    res = ax.norm();
    t.energy.push_back(std::max(x.dot(ax), 0.0));
    t.residual_norms.push_back(res);
    t.iterations = k + 1;
    if (observe) observe(x);
  }
  detail::mark_tolerance(t, tol);
  // For PSD A, (p, A p) ~ 0 puts p in the numerical null space, while p lies
  // in range(A): the residual is already at rounding level.
  if (t.breakdown && !t.iterations_to_tol) t.iterations_to_tol = t.iterations;
  t.limit_vector = x;
  return t;
}

/// x_{k+1} = x_k - step A x_k.
inline SolveTrace richardson(const LinearOp& apply_A, const Vector& e0, double step, double tol, int max_iter,
                             const Observer& observe = {}) {
  SolveTrace t;
  Vector x = e0;
  Vector ax = apply_A(x);
  const double r0 = ax.norm();
  t.energy.push_back(std::max(x.dot(ax), 0.0));
  t.residual_norms.push_back(r0);
  if (observe) observe(x);
  for (int k = 0; k < max_iter; ++k) {
    if (ax.norm() <= tol * r0) break;
    x -= step * ax;
    ax = apply_A(x);
    t.energy.push_back(std::max(x.dot(ax), 0.0));
    t.residual_norms.push_back(ax.norm());
    t.iterations = k + 1;
    if (observe) observe(x);
  }
  if (r0 == 0.0)
    t.iterations_to_tol = 0;
  else
    detail::mark_tolerance(t, tol);
  t.limit_vector = x;
  return t;
}

/// Richardson or CG on the problem's homogeneous equation. Multiplicative
/// traces verify (e_k, A e_k) = ||P_{G⊥} e_k||^2 along the way; CG traces are
/// compared with Richardson from the same start.
inline SolveTrace solve(const AltProblem& problem, double tol, int max_iter, Method method,
                        BetaRule rule = BetaRule::Recommended) {
  detail::Realized R = detail::realize(problem);
  double identity = 0.0;
  Observer observe;
  if (problem.variant == Variant::Multiplicative)
    observe = [&](const Vector& y) {
      const double scale = y.squaredNorm();
      if (scale == 0.0) return;
      const double gp = R.gperp_norm(y);
      identity = std::max(identity, std::abs(gp * gp - y.dot(R.apply(y))) / scale);
    };
  SolveTrace t;
  if (method == Method::CG) {
    t = cg_null_space(R.apply, R.x0, tol, max_iter, rule, observe);
    const SolveTrace rich = richardson(R.apply, R.x0, R.richardson_step, 0.0, t.iterations);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t.energy.size() && k < rich.energy.size(); ++k)
      excess = std::max(excess, t.energy[k] - rich.energy[k]);
    t.optimality_excess = excess;
  } else {
    t = richardson(R.apply, R.x0, R.richardson_step, tol, max_iter, observe);
  }
  if (problem.variant == Variant::Multiplicative) t.energy_identity_residual = identity;
  t.limit_vector = R.to_original(t.limit_vector);
  return t;
}

/// min over degree-k polynomials with p(0) = 1 of max |p(λ)|^2 on the
/// nonzero spectrum. Zero when at most k distinct nonzero values remain;
/// otherwise the Chebyshev value 1/T_k((b+a)/(b-a))^2 on [a, b], the
/// extreme nonzero values.
inline double cg_rate_estimate(const std::vector<double>& spectrum, int k, double zero_tol = 1e-12) {
  std::vector<double> nonzero;
  for (double x : spectrum)
    if (std::abs(x) > zero_tol) nonzero.push_back(x);
  if (nonzero.empty()) throw Error(ErrorCode::EmptySpectrum, "spectrum has no nonzero values");
  const auto distinct = cluster_values(nonzero, zero_tol);
  if (static_cast<int>(distinct.size()) <= k) return 0.0;
  const double a = distinct.front().value;
  const double b = distinct.back().value;
  const double t = std::cosh(static_cast<double>(k) * std::acosh((b + a) / (b - a)));
  return 1.0 / (t * t);
}

}  // namespace pangles
