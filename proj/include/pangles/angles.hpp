#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pangles/check.hpp"
#include "pangles/multiset.hpp"
#include "pangles/subspace.hpp"

namespace pangles {

struct AngleOptions {
  /// Two angles closer than this share one multiplicity cluster.
  double merge_tol = kMergeTol;
  /// Angles with sine (cosine) at most this are reported as exactly 0 (π/2),
  /// consistent with `intersect`.
  double zero_tol = kIntersectTol;
};

/// Cosines and sines of the angles from F to G, one per dimension of F.
/// Cosines are the singular values of Q_F^T Q_G padded with zeros,
/// sines the singular values of (I - P_G) Q_F; both aligned so that
/// cos[i]^2 + sin[i]^2 = 1 and angles ascend.
struct DirectedRaw {
  std::vector<double> cos;
  std::vector<double> sin;
};

namespace detail {

inline DirectedRaw directed_raw(const Matrix& QF, const Matrix& QG) {
  const Index kF = QF.cols();
  const Matrix C = QF.transpose() * QG;
  const Vector sigma = singular_values(C);
  const Vector mu = singular_values(QF - QG * C.transpose());
  DirectedRaw raw;
  raw.cos.resize(static_cast<std::size_t>(kF), 0.0);
  raw.sin.resize(static_cast<std::size_t>(kF), 1.0);
  for (Index i = 0; i < kF; ++i) {
    raw.cos[static_cast<std::size_t>(i)] = i < sigma.size() ? std::clamp(sigma(i), 0.0, 1.0) : 0.0;
    // mu is descending; the smallest sine pairs with the largest cosine.
    raw.sin[static_cast<std::size_t>(i)] = std::clamp(mu(kF - 1 - i), 0.0, 1.0);
  }
  return raw;
}

/// Angle from its cosine and sine: arcsin below π/4 and arccos above, so
/// neither end of [0, π/2] loses digits.
inline double angle_from(double c, double s, double zero_tol) {
  if (s <= zero_tol) return 0.0;
  if (c <= zero_tol) return kHalfPi;
  return s < std::numbers::sqrt2 / 2.0 ? std::asin(s) : std::acos(c);
}

inline void require_angle_pair(const Subspace& F, const Subspace& G) {
  require_same_space(F, G);
  require_nontrivial(F, "first subspace");
  require_nontrivial(G, "second subspace");
}

}  // namespace detail

inline DirectedRaw directed_raw(const Subspace& F, const Subspace& G) {
  detail::require_angle_pair(F, G);
  return detail::directed_raw(F.metric_basis(), G.metric_basis());
}

/// Θ̂(F, G): angles from F to G, total multiplicity dim F.
inline AngleMultiset angles_from_to(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  const DirectedRaw raw = directed_raw(F, G);
  std::vector<double> thetas;
  thetas.reserve(raw.cos.size());
  for (std::size_t i = 0; i < raw.cos.size(); ++i) thetas.push_back(detail::angle_from(raw.cos[i], raw.sin[i], opt.zero_tol));
  return AngleMultiset::from_values(thetas, opt.merge_tol);
}

/// θ = arccos(σ) for every direction of F; loses accuracy near 0.
inline AngleMultiset angles_cosine_based(const Subspace& F, const Subspace& G, double merge_tol = kMergeTol) {
  const DirectedRaw raw = directed_raw(F, G);
  std::vector<double> thetas;
  for (double c : raw.cos) thetas.push_back(std::acos(c));
  return AngleMultiset::from_values(thetas, merge_tol);
}

/// θ = arcsin(μ), μ the singular values of (I - P_G) Q_F.
inline AngleMultiset angles_sine_based(const Subspace& F, const Subspace& G, double merge_tol = kMergeTol) {
  const DirectedRaw raw = directed_raw(F, G);
  std::vector<double> thetas;
  for (double s : raw.sin) thetas.push_back(std::asin(s));
  return AngleMultiset::from_values(thetas, merge_tol);
}

/// Θ(F, G) = Θ̂(F, G) ∩ Θ̂(G, F) with minimum multiplicities.
inline AngleMultiset angles_between(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  return multiset_intersection(angles_from_to(F, G, opt), angles_from_to(G, F, opt), opt.merge_tol);
}

/// ||P_F - P_G||, the gap (aperture).
inline double gap(const Subspace& F, const Subspace& G) {
  require_same_space(F, G);
  return std::clamp(norm2(metric_projector(F) - metric_projector(G)), 0.0, 1.0);
}

/// max{||P_F P_G⊥||, ||P_G P_F⊥||}, the second expression for the gap.
inline double gap_via_complements(const Subspace& F, const Subspace& G) {
  require_same_space(F, G);
  const Subspace Fp = orthogonal_complement(F);
  const Subspace Gp = orthogonal_complement(G);
  const double a = norm2(F.metric_basis().transpose() * Gp.metric_basis());
  const double b = norm2(G.metric_basis().transpose() * Fp.metric_basis());
  return std::max(a, b);
}

namespace detail {

inline void add_set_identity(CheckResult& r, std::string name, const AngleMultiset& lhs, const AngleMultiset& rhs,
                             double tol) {
  r.add(std::move(name), multiset_mismatch(lhs, rhs), tol);
}

inline void add_count(CheckResult& r, std::string name, int actual, Index expected) {
  r.add(std::move(name), std::abs(static_cast<double>(actual) - static_cast<double>(expected)), 0.0);
}

}  // namespace detail

/// The seven identities relating directed angle sets of (F, G), their
/// complements and swaps, plus every multiplicity of 0 and π/2 predicted by
/// the five-parts dimensions.
inline RelationReport seven_relations_check(const Subspace& F, const Subspace& G, double tol = 1e-8,
                                            const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const Subspace Fp = orthogonal_complement(F);
  const Subspace Gp = orthogonal_complement(G);
  require_nontrivial(Fp, "complement of the first subspace");
  require_nontrivial(Gp, "complement of the second subspace");
  const double z = opt.merge_tol;

  const AngleMultiset FG = angles_from_to(F, G, opt);
  const AngleMultiset GF = angles_from_to(G, F, opt);
  const AngleMultiset FGp = angles_from_to(F, Gp, opt);
  const AngleMultiset GFp = angles_from_to(G, Fp, opt);
  const AngleMultiset FpG = angles_from_to(Fp, G, opt);
  const AngleMultiset GpF = angles_from_to(Gp, F, opt);
  const AngleMultiset FpGp = angles_from_to(Fp, Gp, opt);
  const AngleMultiset GpFp = angles_from_to(Gp, Fp, opt);

  RelationReport r;
  using detail::add_set_identity;
  add_set_identity(r, "(1) from(F,G^perp) = pi/2 - from(F,G)", FGp, FG.complemented(), tol);
  add_set_identity(r, "(2) from(G,F) \\ {pi/2} = from(F,G) \\ {pi/2}", GF.without_right(z), FG.without_right(z), tol);
  add_set_identity(r, "(3) from(F^perp,G) \\ {0,pi/2} = pi/2 - from(F,G) \\ {0,pi/2}",
                   FpG.without_zero(z).without_right(z), FG.without_zero(z).without_right(z).complemented(), tol);
  add_set_identity(r, "(4) from(F^perp,G^perp) \\ {0,pi/2} = from(F,G) \\ {0,pi/2}",
                   FpGp.without_zero(z).without_right(z), FG.without_zero(z).without_right(z), tol);
  add_set_identity(r, "(5) from(G,F^perp) \\ {0} = pi/2 - from(F,G) \\ {pi/2}", GFp.without_zero(z),
                   FG.without_right(z).complemented(), tol);
  add_set_identity(r, "(6) from(G^perp,F) \\ {pi/2} = pi/2 - from(F,G) \\ {0}", GpF.without_right(z),
                   FG.without_zero(z).complemented(), tol);
  add_set_identity(r, "(7) from(G^perp,F^perp) \\ {0} = from(F,G) \\ {0}", GpFp.without_zero(z), FG.without_zero(z),
                   tol);

  const FivePartsDims d = five_parts(F, G, opt.zero_tol).dims;
  using detail::add_count;
  struct Row {
    const char* pair;
    const AngleMultiset* set;
    Index zero;
    Index right;
  };
  const std::array<Row, 8> rows{{{"from(F,G)", &FG, d.m00, d.m01},
                                 {"from(G,F)", &GF, d.m00, d.m10},
                                 {"from(F,G^perp)", &FGp, d.m01, d.m00},
                                 {"from(G,F^perp)", &GFp, d.m10, d.m00},
                                 {"from(F^perp,G)", &FpG, d.m10, d.m11},
                                 {"from(G^perp,F)", &GpF, d.m01, d.m11},
                                 {"from(F^perp,G^perp)", &FpGp, d.m11, d.m10},
                                 {"from(G^perp,F^perp)", &GpFp, d.m11, d.m01}}};
  for (const auto& row : rows) {
    add_count(r, std::string("directed mult(0) in ") + row.pair, row.set->multiplicity_of(0.0, z), row.zero);
    add_count(r, std::string("directed mult(pi/2) in ") + row.pair, row.set->multiplicity_of(kHalfPi, z), row.right);
  }
  return r;
}

/// Identities between the symmetric angle sets of (F, G), (F, G⊥), (F⊥, G)
/// and (F⊥, G⊥), plus their 0 and π/2 multiplicities.
inline RelationReport between_pairs_check(const Subspace& F, const Subspace& G, double tol = 1e-8,
                                          const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const Subspace Fp = orthogonal_complement(F);
  const Subspace Gp = orthogonal_complement(G);
  require_nontrivial(Fp, "complement of the first subspace");
  require_nontrivial(Gp, "complement of the second subspace");
  const double z = opt.merge_tol;

  const AngleMultiset FG = angles_between(F, G, opt);
  const AngleMultiset FGp = angles_between(F, Gp, opt);
  const AngleMultiset FpG = angles_between(Fp, G, opt);
  const AngleMultiset FpGp = angles_between(Fp, Gp, opt);

  RelationReport r;
  detail::add_set_identity(r, "(1) between(F,G) \\ {0,pi/2} = pi/2 - between(F,G^perp) \\ {0,pi/2}",
                           FG.without_zero(z).without_right(z), FGp.complemented().without_zero(z).without_right(z),
                           tol);
  detail::add_set_identity(r, "(2) between(F,G) \\ {0} = between(F^perp,G^perp) \\ {0}", FG.without_zero(z),
                           FpGp.without_zero(z), tol);
  detail::add_set_identity(r, "(3) between(F,G^perp) \\ {0} = between(F^perp,G) \\ {0}", FGp.without_zero(z),
                           FpG.without_zero(z), tol);

  const FivePartsDims d = five_parts(F, G, opt.zero_tol).dims;
  struct Row {
    const char* pair;
    const AngleMultiset* set;
    Index zero;
    Index right;
  };
  const std::array<Row, 4> rows{{{"between(F,G)", &FG, d.m00, std::min(d.m01, d.m10)},
                                 {"between(F,G^perp)", &FGp, d.m01, std::min(d.m00, d.m11)},
                                 {"between(F^perp,G)", &FpG, d.m10, std::min(d.m00, d.m11)},
                                 {"between(F^perp,G^perp)", &FpGp, d.m11, std::min(d.m01, d.m10)}}};
  for (const auto& row : rows) {
    detail::add_count(r, std::string("between mult(0) in ") + row.pair, row.set->multiplicity_of(0.0, z), row.zero);
    detail::add_count(r, std::string("between mult(pi/2) in ") + row.pair, row.set->multiplicity_of(kHalfPi, z),
                      row.right);
  }
  return r;
}

/// min over both directed sets of cos² equals 1 - gap²; when gap < 1 or the
/// pair is in generic position, gap = max sin Θ(F, G).
inline CheckResult angle_characterization_of_gap(const Subspace& F, const Subspace& G, double tol = 1e-9,
                                                 const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const DirectedRaw fg = directed_raw(F, G);
  const DirectedRaw gf = directed_raw(G, F);
  const double g = gap(F, G);
  const double min_fg = *std::min_element(fg.cos.begin(), fg.cos.end());
  const double min_gf = *std::min_element(gf.cos.begin(), gf.cos.end());
  const double min_cos2 = std::min(min_fg * min_fg, min_gf * min_gf);

  CheckResult r;
  r.add("min cos^2 over directed sets = 1 - gap^2", std::abs(min_cos2 - (1.0 - g * g)), tol);
  r.add("gap = max{|P_F P_G^perp|, |P_G P_F^perp|}", std::abs(g - gap_via_complements(F, G)), tol);
  if (g < 1.0 - opt.zero_tol || in_generic_position(F, G, opt.zero_tol)) {
    const AngleMultiset between = angles_between(F, G, opt);
    r.add("gap = max sin between(F,G)", std::abs(g - std::sin(between.max())), tol);
  }
  return r;
}

/// Friedrichs cosine by two independent routes.
struct FriedrichsCos {
  /// cos of the smallest nonzero angle between F and G.
  double via_angles = 0.0;
  /// Largest singular value of Q_{F'}^T Q_{G'}, F' = F ⊖ (F ∩ G), G' = G ⊖ (F ∩ G).
  double via_definition = 0.0;
  /// True when F ∩ G is nontrivial, i.e. zero angles were removed before
  /// taking the minimum.
  bool zero_cluster_nonempty = false;
};

inline FriedrichsCos friedrichs_cos_dual(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const AngleMultiset nonzero = angles_between(F, G, opt).without_zero(opt.merge_tol);
  if (nonzero.empty()) throw Error(ErrorCode::AllAnglesZero, "every angle between the subspaces is zero");
  FriedrichsCos out;
  out.via_angles = std::cos(nonzero.min());
  if (nonzero.min() == kHalfPi) out.via_angles = 0.0;

  const Subspace shared = intersect(F, G, opt.zero_tol);
  out.zero_cluster_nonempty = !shared.is_trivial();
  const Subspace Fr = subtract(F, shared);
  const Subspace Gr = subtract(G, shared);
  out.via_definition =
      (Fr.is_trivial() || Gr.is_trivial()) ? 0.0 : norm2(Fr.metric_basis().transpose() * Gr.metric_basis());
  return out;
}

/// c(F, G), the cosine of the Friedrichs angle. Throws AllAnglesZero when
/// every angle between the subspaces vanishes.
inline double friedrichs_cos(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  return friedrichs_cos_dual(F, G, opt).via_angles;
}

/// γ(F, G) = sqrt(1 - c²), the minimum gap.
inline double min_gap(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  const AngleMultiset nonzero = angles_between(F, G, opt).without_zero(opt.merge_tol);
  if (nonzero.empty()) throw Error(ErrorCode::AllAnglesZero, "every angle between the subspaces is zero");
  // sin of the smallest nonzero angle equals sqrt(1 - c^2) without the
  // cancellation near c = 1.
  return std::sin(nonzero.min());
}

/// Squared cosines of the angles from F to G (ascending angles).
inline std::vector<double> cos2_from_to(const Subspace& F, const Subspace& G) {
  const DirectedRaw raw = directed_raw(F, G);
  std::vector<double> out;
  for (double c : raw.cos) out.push_back(c * c);
  return out;
}

/// Perturbation bounds for squared cosines. With a perturbed second
/// subspace G̃:
///   dist(cos²Θ̂(F,G), cos²Θ̂(F,G̃)) <= gap(G,G̃)
/// and, reading the same triple with G as the first subspace:
///   dist(cos²Θ̂(G,F), cos²Θ̂(G̃,F)) <= gap(G,G̃).
inline CheckResult cos2_perturbation_check(const Subspace& F, const Subspace& G, const Subspace& Gt,
                                           double tol = 1e-10) {
  const double g = gap(G, Gt);
  CheckResult r;
  r.add("dist(cos2 from(F,G), cos2 from(F,G~)) <= gap(G,G~)", hausdorff(cos2_from_to(F, G), cos2_from_to(F, Gt)),
        g + tol);
  r.add("dist(cos2 from(G,F), cos2 from(G~,F)) <= gap(G,G~)", hausdorff(cos2_from_to(G, F), cos2_from_to(Gt, F)),
        g + tol);
  return r;
}

struct CornerDims {
  Index m00 = 0, m01 = 0, m10 = 0, m11 = 0;
};

struct AngleReport {
  AngleMultiset directed_fg;
  AngleMultiset directed_gf;
  AngleMultiset between;
  double gap = 0.0;
  /// Absent when every angle between the subspaces is zero.
  std::optional<double> friedrichs_cos;
  std::optional<double> min_gap;
  CornerDims corner_dims;
  /// Set when F ∩ G is nontrivial, so the Friedrichs values depend on the
  /// zero-cluster threshold.
  bool zero_cluster_nonempty = false;
};

inline AngleReport angle_report(const Subspace& F, const Subspace& G, const AngleOptions& opt = {}) {
  detail::require_angle_pair(F, G);
  AngleReport rep;
  rep.directed_fg = angles_from_to(F, G, opt);
  rep.directed_gf = angles_from_to(G, F, opt);
  rep.between = multiset_intersection(rep.directed_fg, rep.directed_gf, opt.merge_tol);
  rep.gap = gap(F, G);
  const AngleMultiset nonzero = rep.between.without_zero(opt.merge_tol);
  if (!nonzero.empty()) {
    rep.friedrichs_cos = nonzero.min() == kHalfPi ? 0.0 : std::cos(nonzero.min());
    rep.min_gap = std::sin(nonzero.min());
  }
  const FivePartsDims d = five_parts(F, G, opt.zero_tol).dims;
  rep.corner_dims = {d.m00, d.m01, d.m10, d.m11};
  rep.zero_cluster_nonempty = d.m00 > 0;
  return rep;
}

}  // namespace pangles
