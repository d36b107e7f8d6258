#pragma once

#include <string>
#include <vector>

#include "pangles/angles.hpp"

namespace pangles {

// A acts on metric coordinates. For the Euclidean inner product these are
// the ordinary coordinates.

/// Symmetric matrix together with its spectral range.
struct OperatorSpec {
  Matrix A;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double spread = 0.0;  // lambda_max - lambda_min
  double norm = 0.0;    // max |lambda|
};

inline OperatorSpec make_operator(const Matrix& A) {
  const SymEig e = sym_eig(A);
  if (A.rows() == 0) throw Error(ErrorCode::EmptySpectrum, "operator has dimension 0");
  OperatorSpec op;
  op.A = 0.5 * (A + A.transpose());
  op.lambda_min = e.eigenvalues(0);
  op.lambda_max = e.eigenvalues(e.eigenvalues.size() - 1);
  op.spread = op.lambda_max - op.lambda_min;
  op.norm = std::max(std::abs(op.lambda_min), std::abs(op.lambda_max));
  return op;
}

inline double rayleigh_quotient(const OperatorSpec& op, const Vector& f) {
  if (f.size() != op.A.rows()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from operator size");
  const double ff = f.squaredNorm();
  if (!(ff > 0.0)) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of the zero vector");
  return f.dot(op.A * f) / ff;
}

/// Sine of the acute angle between the lines spanned by f and g.
inline double line_sine(const Vector& f, const Vector& g) {
  const double nf = f.norm();
  const double ng = g.norm();
  if (!(nf > 0.0) || !(ng > 0.0)) throw Error(ErrorCode::ZeroVector, "angle with the zero vector");
  const Vector u = f / nf;
  const Vector w = g / ng;
  return std::min((w - u.dot(w) * u).norm(), 1.0);
}

/// |λ(f) - λ(g)| <= spread(A) sin θ(f, g).
inline CheckResult rayleigh_bound_check(const OperatorSpec& op, const Vector& f, const Vector& g, double tol = 1e-12) {
  const double lhs = std::abs(rayleigh_quotient(op, f) - rayleigh_quotient(op, g));
  const double rhs = op.spread * line_sine(f, g);
  CheckResult r;
  r.add("|lambda(f) - lambda(g)| <= spread * sin(f,g)", lhs, rhs + tol);
  return r;
}

/// Ritz values of A on F: eigenvalues of Q_F^T A Q_F, ascending.
inline std::vector<double> ritz_set(const OperatorSpec& op, const Subspace& F) {
  require_nontrivial(F, "trial subspace");
  if (F.ambient_dim() != op.A.rows())
    throw Error(ErrorCode::DimensionMismatch, "trial subspace and operator differ in dimension");
  const Matrix& Q = F.metric_basis();
  const Vector v = sym_eigenvalues(Q.transpose() * op.A * Q);
  return {v.data(), v.data() + v.size()};
}

enum class RitzVariant { Gap, GapSquared };

inline std::string to_string(RitzVariant v) { return v == RitzVariant::Gap ? "Gap" : "GapSquared"; }

struct RitzReport {
  std::vector<double> ritz_f;
  std::vector<double> ritz_g;
  double hausdorff = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - hausdorff
  RitzVariant variant = RitzVariant::Gap;
  /// Every Ritz value lies in [min Σ(A), max Σ(A)] up to 1e-10.
  bool contained = true;
  bool pass = false;
};

namespace detail {

inline bool ritz_contained(const OperatorSpec& op, const std::vector<double>& values) {
  const double slack = 1e-10 * std::max(1.0, op.norm);
  for (double x : values)
    if (x < op.lambda_min - slack || x > op.lambda_max + slack) return false;
  return true;
}

inline RitzReport finish_ritz(const OperatorSpec& op, std::vector<double> rf, std::vector<double> rg, double bound,
                              RitzVariant variant, double tol) {
  RitzReport r;
  r.ritz_f = std::move(rf);
  r.ritz_g = std::move(rg);
  r.hausdorff = hausdorff(r.ritz_f, r.ritz_g);
  r.bound = bound;
  r.margin = bound - r.hausdorff;
  r.variant = variant;
  r.contained = ritz_contained(op, r.ritz_f) && ritz_contained(op, r.ritz_g);
  r.pass = r.margin >= -tol && r.contained;
  return r;
}

}  // namespace detail

/// dist(Ritz(A, F), Ritz(A, G)) <= spread(A) gap(F, G).
inline RitzReport ritz_gap_bound_check(const OperatorSpec& op, const Subspace& F, const Subspace& G,
                                       double tol = 1e-10) {
  require_same_space(F, G);
  return detail::finish_ritz(op, ritz_set(op, F), ritz_set(op, G), op.spread * gap(F, G), RitzVariant::Gap, tol);
}

/// Which end of the spectrum an invariant subspace carries.
enum class Extremal { Bottom, Top };

/// Validates that F is A-invariant and spans the top or bottom part of the
/// spectrum. Throws NotInvariant or NotExtremalCluster.
inline Extremal require_extremal_invariant(const OperatorSpec& op, const Subspace& F, double tol = 1e-8) {
  require_nontrivial(F, "invariant subspace");
  const Matrix& Q = F.metric_basis();
  const Matrix H = Q.transpose() * op.A * Q;
  const double scale = std::max(op.norm, 1.0);
  if (norm2(op.A * Q - Q * H) > tol * scale)
    throw Error(ErrorCode::NotInvariant, "subspace is not invariant under the operator");
  const Subspace Fp = orthogonal_complement(F);
  if (Fp.is_trivial()) return Extremal::Bottom;
  const Vector in = sym_eigenvalues(H);
  const Vector out = sym_eigenvalues(Fp.metric_basis().transpose() * op.A * Fp.metric_basis());
  const double slack = tol * scale;
  if (in.maxCoeff() <= out.minCoeff() + slack) return Extremal::Bottom;
  if (out.maxCoeff() <= in.minCoeff() + slack) return Extremal::Top;
  throw Error(ErrorCode::NotExtremalCluster, "invariant subspace does not carry the top or bottom of the spectrum");
}

/// dist(Σ(A|_F), Ritz(A, G)) <= spread(A) gap(F, G)^2 for F invariant and
/// extremal.
inline RitzReport ritz_invariant_bound_check(const OperatorSpec& op, const Subspace& F, const Subspace& G,
                                             double tol = 1e-10) {
  require_same_space(F, G);
  require_extremal_invariant(op, F);
  const double g = gap(F, G);
  return detail::finish_ritz(op, ritz_set(op, F), ritz_set(op, G), op.spread * g * g, RitzVariant::GapSquared, tol);
}

}  // namespace pangles
