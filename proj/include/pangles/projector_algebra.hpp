#pragma once

#include <optional>
#include <vector>

#include "pangles/angles.hpp"

namespace pangles {

// All operators in this header act in metric coordinates (the Euclidean
// image under the Cholesky factor of the inner product). For the Euclidean
// inner product these are the ordinary coordinates.

struct PolarResiduals {
  double orthogonality = 0.0;        // ||W^T W - I||
  double polar = 0.0;                // ||P_G P_F - W sqrt(P_F P_G P_F)||
  double product_equivalence = 0.0;  // ||P_F P_G P_F - W^T P_G P_F P_G W||
  std::optional<double> projector_equivalence;  // ||P_F - W^T P_G W||, gap < 1 only
};

/// Orthogonal W with P_F P_G P_F = W^T P_G P_F P_G W.
struct PolarW {
  Matrix W;
  /// True when gap(F, G) < 1 and W came from the closed-form extension
  /// [P_G P_F + (I-P_G)(I-P_F)] [I - (P_F-P_G)^2]^{-1/2}.
  bool gap_ok = false;
  PolarResiduals residuals;
};

inline PolarResiduals polar_residuals(const Matrix& PF, const Matrix& PG, const Matrix& W, bool with_projector) {
  const Index n = PF.rows();
  PolarResiduals r;
  r.orthogonality = norm2(W.transpose() * W - Matrix::Identity(n, n));
  const Matrix PFPGPF = PF * PG * PF;
  // |T| = (T^T T)^{1/2} for T = P_G P_F, taken from the SVD of T: the
  // square root of T^T T would lose half the digits near zero.
  const Matrix T = PG * PF;
  const Svd d = svd(T);
  r.polar = norm2(T - W * (d.V * d.S.asDiagonal() * d.V.transpose()));
  r.product_equivalence = norm2(PFPGPF - W.transpose() * (PG * PF * PG) * W);
  if (with_projector) r.projector_equivalence = norm2(PF - W.transpose() * PG * W);
  return r;
}

inline PolarW polar_w(const Subspace& F, const Subspace& G, double tol = kIntersectTol) {
  require_same_space(F, G);
  const Index n = F.ambient_dim();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix PF = metric_projector(F);
  const Matrix PG = metric_projector(G);
  const double g = gap(F, G);

  PolarW out;
  if (g < 1.0 - tol) {
    const Matrix D = PF - PG;
    out.W = (PG * PF + (I - PG) * (I - PF)) * inv_sqrt_spd(I - D * D);
    out.gap_ok = true;
  } else {
    // Partial isometry of the polar decomposition of T = P_G P_F on
    // N(T)^perp, completed on N(T) -> N(T^*) by the Procrustes rotation
    // closest to the identity.
    const Svd d = svd(PG * PF);
    Index rank = 0;
    while (rank < d.S.size() && d.S(rank) > tol) ++rank;
    const Matrix Ur = d.U.leftCols(rank);
    const Matrix Vr = d.V.leftCols(rank);
    const Matrix Un = d.U.rightCols(n - rank);
    const Matrix Vn = d.V.rightCols(n - rank);
    out.W = Ur * Vr.transpose();
    if (n - rank > 0) {
      const Svd p = svd(Un.transpose() * Vn);
      out.W += Un * (p.U * p.V.transpose()) * Vn.transpose();
    }
    out.gap_ok = false;
  }
  out.residuals = polar_residuals(PF, PG, out.W, out.gap_ok);
  return out;
}

/// Residual checks for the unitary equivalences carried by W.
inline CheckResult unitary_equivalence_check(const Subspace& F, const Subspace& G, const Matrix& W, double tol = 1e-8) {
  require_same_space(F, G);
  const Matrix PF = metric_projector(F);
  const Matrix PG = metric_projector(G);
  const bool gap_lt_1 = gap(F, G) < 1.0 - kIntersectTol;
  const PolarResiduals res = polar_residuals(PF, PG, W, gap_lt_1);
  CheckResult r;
  r.add("W orthogonal", res.orthogonality, tol);
  r.add("P_G P_F = W sqrt(P_F P_G P_F)", res.polar, tol);
  r.add("P_F P_G P_F = W^T P_G P_F P_G W", res.product_equivalence, tol);
  if (res.projector_equivalence) r.add("P_F = W^T P_G W", *res.projector_equivalence, tol);

  // (P_F P_G)|M_F and (P_G P_F)|M_G are unitarily equivalent, with W
  // carrying M_F onto M_G.
  const FiveParts parts = five_parts(F, G);
  const Matrix& QMF = parts.mF.metric_basis();
  const Matrix& QMG = parts.mG.metric_basis();
  if (QMF.cols() != QMG.cols()) {
    r.add_flag("dim M_F = dim M_G", false);
  } else if (QMF.cols() > 0) {
    const Vector sF = sym_eigenvalues(QMF.transpose() * PF * PG * QMF);
    const Vector sG = sym_eigenvalues(QMG.transpose() * PG * PF * QMG);
    r.add("spectrum (P_F P_G)|M_F = spectrum (P_G P_F)|M_G",
          sorted_mismatch({sF.data(), sF.data() + sF.size()}, {sG.data(), sG.data() + sG.size()}), tol);
    const Matrix WQ = W * QMF;
    r.add("W maps M_F onto M_G", norm2(WQ - QMG * (QMG.transpose() * WQ)), tol);
  }
  return r;
}

struct SpectrumReport {
  std::vector<double> predicted;  // ascending
  std::vector<double> computed;   // ascending
  std::vector<Cluster> predicted_clusters;
  std::vector<Cluster> computed_clusters;
  double hausdorff = 0.0;
  double max_deviation = 0.0;  // elementwise after sorting
  bool multiplicities_match = false;
  /// Spectrum of P_F + P_G off 0 lies in [1 - ||P_F P_G||, 1 + ||P_F P_G||].
  std::optional<bool> interval_enclosure;
  bool pass = false;
};

namespace detail {

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline SpectrumReport finish_spectrum(std::vector<double> predicted, const Vector& eigs, double tol, double merge_tol) {
  SpectrumReport r;
  std::sort(predicted.begin(), predicted.end());
  r.predicted = std::move(predicted);
  r.computed = to_std(eigs);
  std::sort(r.computed.begin(), r.computed.end());
  r.predicted_clusters = cluster_values(r.predicted, merge_tol);
  r.computed_clusters = cluster_values(r.computed, merge_tol);
  r.hausdorff = hausdorff(r.predicted, r.computed);
  r.max_deviation = sorted_mismatch(r.predicted, r.computed);
  r.multiplicities_match = r.predicted_clusters.size() == r.computed_clusters.size();
  for (std::size_t i = 0; r.multiplicities_match && i < r.predicted_clusters.size(); ++i)
    r.multiplicities_match = r.predicted_clusters[i].mult == r.computed_clusters[i].mult &&
                             std::abs(r.predicted_clusters[i].value - r.computed_clusters[i].value) <= tol;
  r.pass = r.hausdorff <= tol && r.max_deviation <= tol && r.multiplicities_match;
  return r;
}

inline void append_n(std::vector<double>& v, Index count, double value) {
  v.insert(v.end(), static_cast<std::size_t>(count), value);
}

}  // namespace detail

/// Σ(P_G - P_F): ±1 on M10/M01, 0 on M00 ⊕ M11, ±sin θ for the angles
/// strictly between 0 and π/2; compared with a direct eigendecomposition.
inline SpectrumReport spectrum_difference(const Subspace& F, const Subspace& G, double tol = 1e-8,
                                          const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const FivePartsDims d = five_parts(F, G, opt.zero_tol).dims;
  std::vector<double> predicted;
  detail::append_n(predicted, d.m10, 1.0);
  detail::append_n(predicted, d.m01, -1.0);
  detail::append_n(predicted, d.m00 + d.m11, 0.0);
  const AngleMultiset generic = angles_between(F, G, opt).without_zero(opt.merge_tol).without_right(opt.merge_tol);
  for (const auto& c : generic.entries()) {
    detail::append_n(predicted, c.mult, std::sin(c.value));
    detail::append_n(predicted, c.mult, -std::sin(c.value));
  }
  return detail::finish_spectrum(std::move(predicted), sym_eigenvalues(metric_projector(G) - metric_projector(F)), tol,
                                 opt.merge_tol);
}

/// Σ(P_F + P_G): 2 on M00, 0 on M11, 1 on M01 ⊕ M10, 1 ± cos θ for the
/// angles strictly between 0 and π/2.
inline SpectrumReport spectrum_sum(const Subspace& F, const Subspace& G, double tol = 1e-8,
                                   const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const FivePartsDims d = five_parts(F, G, opt.zero_tol).dims;
  std::vector<double> predicted;
  detail::append_n(predicted, d.m00, 2.0);
  detail::append_n(predicted, d.m11, 0.0);
  detail::append_n(predicted, d.m01 + d.m10, 1.0);
  const AngleMultiset generic = angles_between(F, G, opt).without_zero(opt.merge_tol).without_right(opt.merge_tol);
  for (const auto& c : generic.entries()) {
    detail::append_n(predicted, c.mult, 1.0 + std::cos(c.value));
    detail::append_n(predicted, c.mult, 1.0 - std::cos(c.value));
  }
  const Matrix PF = metric_projector(F);
  const Matrix PG = metric_projector(G);
  SpectrumReport r = detail::finish_spectrum(std::move(predicted), sym_eigenvalues(PF + PG), tol, opt.merge_tol);
  const double c = norm2(PF * PG);
  bool inside = true;
  for (double x : r.computed)
    if (std::abs(x) > tol && (x < 1.0 - c - tol || x > 1.0 + c + tol)) inside = false;
  r.interval_enclosure = inside;
  r.pass = r.pass && inside;
  return r;
}

/// Principal subspaces for one angle θ ≠ π/2. Column i of U's basis and
/// column i of V's basis form a pair of principal vectors:
/// P_F v_i = cos θ u_i and P_G u_i = cos θ v_i.
struct PrincipalPair {
  double theta = 0.0;
  Subspace U;
  Subspace V;
};

namespace detail {

struct PrincipalDirections {
  Matrix Y;  // kF x m, coordinates in the F basis
  Matrix Z;  // kG x m, coordinates in the G basis
  std::vector<double> theta;
};

/// Singular directions of Q_F^T Q_G with angles from per-vector sines,
/// ascending; directions at π/2 are dropped.
inline PrincipalDirections principal_directions(const Subspace& F, const Subspace& G, double zero_tol) {
  const Matrix& QF = F.metric_basis();
  const Matrix& QG = G.metric_basis();
  const Svd d = svd(QF.transpose() * QG);
  PrincipalDirections out;
  const Index m = d.S.size();
  out.Y.resize(QF.cols(), 0);
  out.Z.resize(QG.cols(), 0);
  for (Index i = 0; i < m; ++i) {
    const double c = std::clamp(d.S(i), 0.0, 1.0);
    if (c <= zero_tol) continue;
    const Vector u = QF * d.U.col(i);
    const double s = std::min((u - QG * (QG.transpose() * u)).norm(), 1.0);
    out.Y.conservativeResize(Eigen::NoChange, out.Y.cols() + 1);
    out.Z.conservativeResize(Eigen::NoChange, out.Z.cols() + 1);
    out.Y.col(out.Y.cols() - 1) = d.U.col(i);
    out.Z.col(out.Z.cols() - 1) = d.V.col(i);
    out.theta.push_back(angle_from(c, s, zero_tol));
  }
  return out;
}

}  // namespace detail

inline std::vector<PrincipalPair> principal_pairs(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const detail::PrincipalDirections dirs = detail::principal_directions(F, G, opt.zero_tol);
  std::vector<PrincipalPair> out;
  std::size_t i = 0;
  const auto count = dirs.theta.size();
  while (i < count) {
    std::size_t j = i + 1;
    while (j < count && dirs.theta[j] - dirs.theta[j - 1] <= opt.merge_tol) ++j;
    const auto width = static_cast<Index>(j - i);
    Matrix U = F.metric_basis() * dirs.Y.middleCols(static_cast<Index>(i), width);
    Matrix V = G.metric_basis() * dirs.Z.middleCols(static_cast<Index>(i), width);
    for (Index c = 0; c < width; ++c)
      if (U.col(c).dot(V.col(c)) < 0.0) V.col(c) = -V.col(c);
    double theta = 0.0;
    for (std::size_t t = i; t < j; ++t) theta += dirs.theta[t];
    theta /= static_cast<double>(j - i);
    out.push_back({theta, Subspace::from_metric_basis(std::move(U), F.inner_product()),
                   Subspace::from_metric_basis(std::move(V), G.inner_product())});
    i = j;
  }
  return out;
}

/// Largest violation of P_F v_i = cos θ u_i and P_G u_i = cos θ v_i over the
/// matched columns of a principal pair.
inline double principal_pair_residual(const Subspace& F, const Subspace& G, const PrincipalPair& p) {
  const Matrix& U = p.U.metric_basis();
  const Matrix& V = p.V.metric_basis();
  const Matrix& QF = F.metric_basis();
  const Matrix& QG = G.metric_basis();
  const double c = std::cos(p.theta);
  const double a = max_abs(QF * (QF.transpose() * V) - c * U);
  const double b = max_abs(QG * (QG.transpose() * U) - c * V);
  return std::max(a, b);
}

/// Principal pairs for (F⊥, G), (F, G⊥) and (F⊥, G⊥) built from one pair of
/// (F, G) with u⊥ = (v - cos θ u)/sin θ and v⊥ = (u - cos θ v)/sin θ.
struct ComplementPairs {
  PrincipalPair fperp_g;      // (U⊥, V) at π/2 - θ
  PrincipalPair f_gperp;      // (U, V⊥) at π/2 - θ
  PrincipalPair fperp_gperp;  // (U⊥, -V⊥) at θ
};

inline ComplementPairs complement_pairs(const PrincipalPair& p, double zero_tol = kIntersectTol) {
  if (p.theta <= zero_tol || p.theta >= kHalfPi - zero_tol)
    throw Error(ErrorCode::DegenerateAngle, "complement pairs need an angle strictly between 0 and pi/2");
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const Matrix& U = p.U.metric_basis();
  const Matrix& V = p.V.metric_basis();
  Matrix Uperp = (V - c * U) / s;
  Matrix Vperp = (U - c * V) / s;
  const auto& ipF = p.U.inner_product();
  const auto& ipG = p.V.inner_product();
  ComplementPairs out{
      {kHalfPi - p.theta, Subspace::from_metric_basis(Uperp, ipF), p.V},
      {kHalfPi - p.theta, p.U, Subspace::from_metric_basis(Vperp, ipG)},
      // The sign flip keeps +cos θ in the defining equations.
      {p.theta, Subspace::from_metric_basis(Uperp, ipF), Subspace::from_metric_basis(-Vperp, ipG)},
  };
  return out;
}

/// A pair of principal invariant subspaces selected by an angle range.
struct InvariantPair {
  Subspace U;
  /// From the projector formula P_V = P_G P_U ((P_F P_G)|_U)^{-1} P_U P_G.
  Subspace V;
  /// span P_G U, the independent construction of V.
  Subspace V_direct;
  /// Angles of Θ(U, V).
  AngleMultiset angles;
  /// Condition of ((P_F P_G)|_U)^{-1}: 1 / cos² of the largest selected angle.
  double condition = 1.0;
  CheckResult checks;
};

/// Finite-dimensional spectral construction: U sums the eigenvectors of
/// (P_F P_G)|_F whose angles lie in [lo, hi], hi < π/2.
inline InvariantPair principal_invariant_pair(const Subspace& F, const Subspace& G, double lo, double hi,
                                              double tol = 1e-8, const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  if (hi >= kHalfPi) throw Error(ErrorCode::RangeIncludesRightAngle, "angle range must exclude pi/2");
  if (lo > hi) throw Error(ErrorCode::EmptySelection, "empty angle range");
  const detail::PrincipalDirections dirs = detail::principal_directions(F, G, opt.zero_tol);
  Matrix Y(F.dim(), 0);
  double largest = 0.0;
  for (std::size_t i = 0; i < dirs.theta.size(); ++i) {
    const double t = dirs.theta[i];
    if (t >= lo - opt.merge_tol && t <= hi + opt.merge_tol && t < kHalfPi) {
      Y.conservativeResize(Eigen::NoChange, Y.cols() + 1);
      Y.col(Y.cols() - 1) = dirs.Y.col(static_cast<Index>(i));
      largest = std::max(largest, t);
    }
  }
  if (Y.cols() == 0) throw Error(ErrorCode::EmptySelection, "no angle of (F, G) lies in the requested range");

  const Index n = F.ambient_dim();
  const Matrix QU = F.metric_basis() * Y;
  const Matrix PG = metric_projector(G);
  const Matrix PF = metric_projector(F);
  // ((P_F P_G)|_U)^{-1} through the eigendecomposition of its matrix in the U basis.
  const Matrix X = QU.transpose() * PG * QU;
  const SymEig ex = sym_eig(X);
  const Vector inv = ex.eigenvalues.cwiseInverse();
  const Matrix Xinv = ex.eigenvectors * inv.asDiagonal() * ex.eigenvectors.transpose();
  const Matrix PV = PG * QU * Xinv * QU.transpose() * PG;
  const SymEig ev = sym_eig(PV);
  Matrix QV(n, 0);
  for (Index i = 0; i < n; ++i)
    if (ev.eigenvalues(i) > 0.5) {
      QV.conservativeResize(Eigen::NoChange, QV.cols() + 1);
      QV.col(QV.cols() - 1) = ev.eigenvectors.col(i);
    }

  InvariantPair out{Subspace::from_metric_basis(QU, F.inner_product()),
                    Subspace::from_metric_basis(QV, G.inner_product()),
                    Subspace::from_metric_basis(qr_orthonormalize(PG * QU, 1e-12), G.inner_product()),
                    {},
                    1.0 / (std::cos(largest) * std::cos(largest)),
                    {}};
  CheckResult& r = out.checks;
  r.add("P_V idempotent", norm2(PV * PV - PV), tol);
  r.add("dim V = dim U", std::abs(static_cast<double>(QV.cols() - QU.cols())), 0.0);
  if (out.V.dim() == out.V_direct.dim() && out.V.dim() > 0)
    r.add("V (projector formula) = span P_G U", angles_from_to(out.V, out.V_direct, opt).max(), tol);
  const Matrix PU = QU * QU.transpose();
  r.add("P_F V within U", norm2((Matrix::Identity(n, n) - PU) * PF * QV), tol);
  r.add("P_G U within V", norm2((Matrix::Identity(n, n) - QV * QV.transpose()) * PG * QU), tol);
  if (out.V.dim() > 0) {
    const AngleMultiset uv = angles_from_to(out.U, out.V, opt);
    const AngleMultiset vu = angles_from_to(out.V, out.U, opt);
    r.add_flag("strictly nondegenerate (pi/2 not an angle of U, V)",
               uv.multiplicity_of(kHalfPi, opt.merge_tol) == 0 && vu.multiplicity_of(kHalfPi, opt.merge_tol) == 0);
    out.angles = multiset_intersection(uv, vu, opt.merge_tol);
    // Enclosure: the angles of (U, V) form a sub-multiset of Θ(F, G).
    const AngleMultiset all = angles_between(F, G, opt);
    bool enclosed = true;
    for (const auto& c : out.angles.entries()) {
      int available = 0;
      for (const auto& a : all.entries())
        if (std::abs(a.value - c.value) <= tol) available += a.mult;
      if (available < c.mult) enclosed = false;
    }
    r.add_flag("angles(U,V) within angles(F,G)", enclosed);
    const PolarW pw = polar_w(F, G);
    r.add("P_V = W P_U W^T", norm2(QV * QV.transpose() - pw.W * PU * pw.W.transpose()), tol);
  }
  return out;
}

}  // namespace pangles
