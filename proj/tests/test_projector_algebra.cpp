#include <gtest/gtest.h>

#include "support/random.hpp"

using namespace pangles;
using pangles::testing::Rng;

namespace {

Subspace line(double t) {
  Matrix v(2, 1);
  v << std::cos(t), std::sin(t);
  return Subspace::from_spanning(v);
}

std::pair<Subspace, Subspace> r3_example(double t) {
  Matrix g(3, 2);
  g << 1, 0, 0, std::cos(t), 0, std::sin(t);
  return {Subspace::from_spanning(Matrix::Identity(3, 3).leftCols(2)), Subspace::from_spanning(g)};
}

std::pair<Subspace, Subspace> corner_example() {
  Matrix f(4, 2), g(4, 2);
  f << 1, 0, 0, 1, 0, 0, 0, 0;
  g << 1, 0, 0, 0, 0, 1, 0, 0;
  return {Subspace::from_spanning(f), Subspace::from_spanning(g)};
}

Matrix rotation(double t) {
  Matrix R(2, 2);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return R;
}

/// |sin| of the angle between two unit vectors, sign-agnostic.
double line_distance(const Vector& a, const Vector& b) { return std::sqrt(std::max(0.0, 1.0 - std::pow(a.dot(b), 2))); }

}  // namespace

TEST(PolarW, EqualSubspacesGiveIdentity) {
  const Subspace F = Subspace::from_spanning(Matrix::Identity(4, 4).leftCols(2));
  const PolarW w = polar_w(F, F);
  EXPECT_TRUE(w.gap_ok);
  EXPECT_LE(max_abs(w.W - Matrix::Identity(4, 4)), 1e-14);
  EXPECT_TRUE(unitary_equivalence_check(F, F, w.W).pass());
}

TEST(PolarW, LinesGiveRotation) {
  const double t = 0.7;
  const PolarW w = polar_w(line(0), line(t));
  EXPECT_TRUE(w.gap_ok);
  EXPECT_LE(max_abs(w.W - rotation(t)), 1e-12);
  ASSERT_TRUE(w.residuals.projector_equivalence.has_value());
  EXPECT_LE(*w.residuals.projector_equivalence, 1e-10);
  const CheckResult r = unitary_equivalence_check(line(0), line(t), w.W, 1e-10);
  EXPECT_TRUE(r.pass());
}

TEST(PolarW, OrthogonalLinesUseConstructiveBranch) {
  const PolarW w = polar_w(line(0), line(kHalfPi));
  EXPECT_FALSE(w.gap_ok);
  EXPECT_LE(w.residuals.product_equivalence, 1e-8);
  EXPECT_LE(w.residuals.orthogonality, 1e-12);
  EXPECT_FALSE(w.residuals.projector_equivalence.has_value());
  const CheckResult r = unitary_equivalence_check(line(0), line(kHalfPi), w.W);
  EXPECT_TRUE(r.pass());
  for (const auto& item : r.items) EXPECT_NE(item.name, "P_F = W^T P_G W");
}

TEST(PolarW, RandomPairs) {
  Rng rng(41);
  int constructive = 0;
  for (int t = 0; t < 60; ++t) {
    const Index n = pangles::testing::uniform_int(2, 40, rng);
    const auto [F, G] = pangles::testing::random_pair(n, rng);
    const PolarW w = polar_w(F, G);
    EXPECT_LE(w.residuals.orthogonality, 1e-8);
    EXPECT_LE(w.residuals.polar, 1e-8);
    EXPECT_LE(w.residuals.product_equivalence, 1e-8);
    if (w.gap_ok) {
      EXPECT_LE(*w.residuals.projector_equivalence, 1e-8);
    } else {
      ++constructive;
    }
    EXPECT_TRUE(unitary_equivalence_check(F, G, w.W).pass());
  }
  EXPECT_GT(constructive, 0);
}

TEST(SpectrumDifference, Examples) {
  const double t = 0.4;
  const SpectrumReport l = spectrum_difference(line(0), line(t));
  EXPECT_TRUE(l.pass);
  ASSERT_EQ(l.computed.size(), 2u);
  EXPECT_NEAR(l.computed[0], -std::sin(t), 1e-14);
  EXPECT_NEAR(l.computed[1], std::sin(t), 1e-14);

  const SpectrumReport same = spectrum_difference(line(0), line(0));
  EXPECT_TRUE(same.pass);
  ASSERT_EQ(same.computed_clusters.size(), 1u);
  EXPECT_EQ(same.computed_clusters[0].mult, 2);

  const auto [F, G] = corner_example();
  const SpectrumReport c = spectrum_difference(F, G);
  EXPECT_TRUE(c.pass);
  const std::vector<double> expect{-1, 0, 0, 1};
  EXPECT_LE(sorted_mismatch(c.computed, expect), 1e-14);
  EXPECT_LE(sorted_mismatch(c.predicted, expect), 0.0);
}

TEST(SpectrumSum, Examples) {
  const double t = 0.4;
  const SpectrumReport l = spectrum_sum(line(0), line(t));
  EXPECT_TRUE(l.pass);
  EXPECT_NEAR(l.computed[0], 1 - std::cos(t), 1e-14);
  EXPECT_NEAR(l.computed[1], 1 + std::cos(t), 1e-14);
  const SpectrumReport same = spectrum_sum(line(0), line(0));
  EXPECT_LE(sorted_mismatch(same.computed, {0.0, 2.0}), 1e-15);
  const auto [F, G] = corner_example();
  const SpectrumReport c = spectrum_sum(F, G);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(sorted_mismatch(c.computed, {0, 1, 1, 2}), 1e-14);
}

TEST(Spectra, RandomPairsMatchEigendecomposition) {
  Rng rng(42);
  for (int t = 0; t < 60; ++t) {
    const Index n = pangles::testing::uniform_int(2, 40, rng);
    const auto [F, G] = pangles::testing::random_pair(n, rng);
    const SpectrumReport d = spectrum_difference(F, G);
    const SpectrumReport s = spectrum_sum(F, G);
    EXPECT_TRUE(d.pass) << "difference hausdorff " << d.hausdorff;
    EXPECT_TRUE(s.pass) << "sum hausdorff " << s.hausdorff;
  }
}

TEST(PrincipalPairs, Lines) {
  const double t = 0.5;
  const auto pairs = principal_pairs(line(0), line(t));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_NEAR(pairs[0].theta, t, 1e-15);
  const Vector u = pairs[0].U.basis().col(0);
  const Vector v = pairs[0].V.basis().col(0);
  EXPECT_LE(line_distance(u, Vector::Unit(2, 0)), 1e-14);
  Vector expect_v(2);
  expect_v << std::cos(t), std::sin(t);
  EXPECT_LE(line_distance(v, expect_v), 1e-14);
  EXPECT_GE(u.dot(v), 0.0);
  EXPECT_LE(principal_pair_residual(line(0), line(t), pairs[0]), 1e-14);
}

TEST(PrincipalPairs, EqualSubspacesSinglePairAtZero) {
  const Subspace F = Subspace::from_spanning(Matrix::Identity(4, 4).leftCols(2));
  const auto pairs = principal_pairs(F, F);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].theta, 0.0);
  EXPECT_EQ(pairs[0].U.dim(), 2);
  EXPECT_LE(gap(pairs[0].U, F), 1e-14);
}

TEST(PrincipalPairs, R3Example) {
  const double t = 0.8;
  const auto [F, G] = r3_example(t);
  const auto pairs = principal_pairs(F, G);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].theta, 0.0);
  EXPECT_LE(line_distance(pairs[0].U.basis().col(0), Vector::Unit(3, 0)), 1e-14);
  EXPECT_NEAR(pairs[1].theta, t, 1e-14);
  for (const auto& p : pairs) EXPECT_LE(principal_pair_residual(F, G, p), 1e-12);
}

TEST(PrincipalPairs, RandomResidualsAndMutualOrthogonality) {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    const Index n = pangles::testing::uniform_int(2, 30, rng);
    const auto p = pangles::testing::random_planted_pair(n, rng);
    const auto pairs = principal_pairs(p.F, p.G);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      EXPECT_LE(principal_pair_residual(p.F, p.G, pairs[i]), 1e-8);
      // Θ(U, V) = {θ}.
      const AngleMultiset uv = angles_between(pairs[i].U, pairs[i].V);
      EXPECT_NEAR(uv.max(), pairs[i].theta, 1e-8);
      EXPECT_NEAR(uv.min(), pairs[i].theta, 1e-8);
      for (std::size_t j = 0; j < pairs.size(); ++j)
        if (i != j) {
          EXPECT_LE(norm2(metric_projector(pairs[i].U) * metric_projector(pairs[j].V)), 1e-8);
        }
    }
    // Principal subspaces exhaust the angles below π/2.
    Index total = 0;
    for (const auto& pr : pairs) total += pr.U.dim();
    EXPECT_EQ(total, p.F.dim() - p.dims.m01);
  }
}

TEST(ComplementPairs, Lines) {
  const double t = 0.3;
  const Subspace F = line(0), G = line(t);
  const auto pairs = principal_pairs(F, G);
  const ComplementPairs c = complement_pairs(pairs[0]);
  const Subspace Fp = orthogonal_complement(F), Gp = orthogonal_complement(G);
  EXPECT_LE(line_distance(c.fperp_g.U.basis().col(0), Vector::Unit(2, 1)), 1e-14);
  EXPECT_NEAR(c.fperp_g.theta, kHalfPi - t, 1e-15);
  EXPECT_NEAR(angles_between(c.fperp_g.U, c.fperp_g.V).min(), kHalfPi - t, 1e-14);
  EXPECT_LE(principal_pair_residual(Fp, G, c.fperp_g), 1e-14);
  EXPECT_LE(principal_pair_residual(F, Gp, c.f_gperp), 1e-14);
  EXPECT_LE(principal_pair_residual(Fp, Gp, c.fperp_gperp), 1e-14);
}

TEST(ComplementPairs, QuarterPiKeepsAngle) {
  const auto pairs = principal_pairs(line(0), line(kHalfPi / 2));
  const ComplementPairs c = complement_pairs(pairs[0]);
  EXPECT_NEAR(angles_between(c.fperp_gperp.U, c.fperp_gperp.V).min(), kHalfPi / 2, 1e-14);
}

TEST(ComplementPairs, DegenerateAngleRejected) {
  const auto pairs = principal_pairs(line(0.2), line(0.2));
  try {
    complement_pairs(pairs[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateAngle);
  }
}

TEST(ComplementPairs, RandomPlantedPairs) {
  Rng rng(44);
  for (int t = 0; t < 30; ++t) {
    const Index n = pangles::testing::uniform_int(4, 30, rng);
    const auto p = pangles::testing::random_planted_pair(n, rng);
    const Subspace Fp = orthogonal_complement(p.F), Gp = orthogonal_complement(p.G);
    for (const auto& pr : principal_pairs(p.F, p.G)) {
      if (pr.theta <= 1e-8) continue;
      const ComplementPairs c = complement_pairs(pr);
      EXPECT_LE(principal_pair_residual(Fp, p.G, c.fperp_g), 1e-8);
      EXPECT_LE(principal_pair_residual(p.F, Gp, c.f_gperp), 1e-8);
      EXPECT_LE(principal_pair_residual(Fp, Gp, c.fperp_gperp), 1e-8);
    }
  }
}

TEST(InvariantPair, R3SelectsSinglePair) {
  const double t = 0.8;
  const auto [F, G] = r3_example(t);
  const InvariantPair ip = principal_invariant_pair(F, G, t - 0.01, t + 0.01);
  EXPECT_TRUE(ip.checks.pass());
  ASSERT_EQ(ip.U.dim(), 1);
  EXPECT_LE(line_distance(ip.U.basis().col(0), Vector::Unit(3, 1)), 1e-12);
  Vector v(3);
  v << 0, std::cos(t), std::sin(t);
  EXPECT_LE(line_distance(ip.V.basis().col(0), v), 1e-12);
  EXPECT_NEAR(ip.condition, 1.0 / std::pow(std::cos(t), 2), 1e-10);
}

TEST(InvariantPair, ZeroRangeOnEqualSubspaces) {
  const Subspace F = Subspace::from_spanning(Matrix::Identity(4, 4).leftCols(2));
  const InvariantPair ip = principal_invariant_pair(F, F, 0.0, 1e-3);
  EXPECT_TRUE(ip.checks.pass());
  EXPECT_LE(gap(ip.U, F), 1e-12);
  EXPECT_LE(gap(ip.V, F), 1e-12);
}

TEST(InvariantPair, WholeRangeOnLines) {
  const double t = 1.2;
  const InvariantPair ip = principal_invariant_pair(line(0), line(t), 0.0, kHalfPi - 1e-3);
  EXPECT_TRUE(ip.checks.pass());
  EXPECT_LE(gap(ip.U, line(0)), 1e-12);
  EXPECT_LE(gap(ip.V, line(t)), 1e-12);
}

TEST(InvariantPair, Errors) {
  try {
    principal_invariant_pair(line(0), line(0.5), 0.0, kHalfPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RangeIncludesRightAngle);
  }
  try {
    principal_invariant_pair(line(0), line(0.5), 0.8, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySelection);
  }
}

TEST(InvariantPair, RandomRangesEnclosed) {
  Rng rng(45);
  for (int t = 0; t < 30; ++t) {
    const Index n = pangles::testing::uniform_int(4, 30, rng);
    const auto p = pangles::testing::random_planted_pair(n, rng);
    const AngleMultiset all = angles_between(p.F, p.G).without_right();
    if (all.empty()) continue;
    const auto& e = all.entries();
    const double lo = e[static_cast<std::size_t>(pangles::testing::uniform_int(0, static_cast<int>(e.size()) - 1, rng))].value;
    const InvariantPair ip = principal_invariant_pair(p.F, p.G, lo, std::min(lo + 0.3, kHalfPi - 0.01));
    EXPECT_TRUE(ip.checks.pass());
  }
}
