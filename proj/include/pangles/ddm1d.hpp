#pragma once

#include <optional>
#include <random>
#include <vector>

#include "pangles/altproj.hpp"
#include "pangles/projector_algebra.hpp"

namespace pangles {

// Two-subdomain overlap [β, α] for -u'' on [0, 1] with homogeneous
// Dirichlet data, discretized by piecewise-linear finite elements with the
// stiffness inner product ∫ u'v'. Because α and β are mesh nodes, the
// subspaces below are represented exactly.

struct DdmConfig {
  double alpha = 0.6;
  double beta = 0.4;
  /// Interior nodes, strictly increasing in (0, 1), containing α and β.
  std::vector<double> mesh;
};

inline void require_overlap(double alpha, double beta) {
  if (!(0.0 < beta && beta < alpha && alpha < 1.0))
    throw Error(ErrorCode::BadOverlap, "need 0 < beta < alpha < 1");
}

/// Nodes j/N, j = 1..N-1, with α and β inserted when not already present.
inline std::vector<double> uniform_mesh_with(int intervals, double alpha, double beta) {
  require_overlap(alpha, beta);
  if (intervals < 1) throw Error(ErrorCode::NodesMissing, "mesh needs at least one interval");
  std::vector<double> nodes;
  for (int j = 1; j < intervals; ++j) nodes.push_back(static_cast<double>(j) / intervals);
  for (double x : {alpha, beta}) {
    const bool present =
        std::any_of(nodes.begin(), nodes.end(), [x](double y) { return std::abs(x - y) <= 1e-12; });
    if (!present) nodes.push_back(x);
  }
  std::sort(nodes.begin(), nodes.end());
  // Snap to the exact interface values.
  for (double& y : nodes)
    for (double x : {alpha, beta})
      if (std::abs(x - y) <= 1e-12) y = x;
  return nodes;
}

inline DdmConfig uniform_config(double alpha, double beta, int intervals) {
  return {alpha, beta, uniform_mesh_with(intervals, alpha, beta)};
}

struct DdmSpaces {
  DdmConfig config;
  /// Element lengths h_1..h_{m+1}.
  std::vector<double> h;
  Matrix K;
  InnerProductPtr ip;
  /// Hats at the nodes left of α: functions vanishing on [α, 1].
  Subspace Fperp;
  /// Hats at the nodes right of β: functions vanishing on [0, β].
  Subspace Gperp;
  Subspace F;
  Subspace G;
  Index alpha_node = 0;
  Index beta_node = 0;
};

inline Matrix stiffness(const std::vector<double>& h) {
  const auto m = static_cast<Index>(h.size()) - 1;
  Matrix K = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    const double hl = h[static_cast<std::size_t>(i)];
    const double hr = h[static_cast<std::size_t>(i) + 1];
    K(i, i) = 1.0 / hl + 1.0 / hr;
    if (i + 1 < m) {
      K(i, i + 1) = -1.0 / hr;
      K(i + 1, i) = -1.0 / hr;
    }
  }
  return K;
}

inline DdmSpaces assemble(const DdmConfig& config) {
  require_overlap(config.alpha, config.beta);
  const auto& x = config.mesh;
  if (x.empty()) throw Error(ErrorCode::NodesMissing, "mesh has no interior nodes");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double prev = i == 0 ? 0.0 : x[i - 1];
    if (!(x[i] > prev) || !(x[i] < 1.0))
      throw Error(ErrorCode::NodesMissing, "mesh must be strictly increasing inside (0, 1)");
  }
  auto find = [&](double v) -> Index {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i] - v) <= 1e-12) return static_cast<Index>(i);
    throw Error(ErrorCode::NodesMissing, "interface point " + std::to_string(v) + " is not a mesh node");
  };
  DdmSpaces s{config, {}, {}, {}, Subspace::trivial(InnerProduct::euclidean(1)),
              Subspace::trivial(InnerProduct::euclidean(1)), Subspace::trivial(InnerProduct::euclidean(1)),
              Subspace::trivial(InnerProduct::euclidean(1)), 0, 0};
  s.alpha_node = find(config.alpha);
  s.beta_node = find(config.beta);
  for (std::size_t i = 0; i <= x.size(); ++i) {
    const double left = i == 0 ? 0.0 : x[i - 1];
    const double right = i == x.size() ? 1.0 : x[i];
    s.h.push_back(right - left);
  }
  s.K = stiffness(s.h);
  s.ip = InnerProduct::weighted(s.K);
  const auto m = static_cast<Index>(x.size());
  const Matrix I = Matrix::Identity(m, m);
  s.Fperp = Subspace::from_spanning(I.leftCols(s.alpha_node), s.ip);
  s.Gperp = Subspace::from_spanning(I.rightCols(m - s.beta_node - 1), s.ip);
  s.F = orthogonal_complement(s.Fperp);
  s.G = orthogonal_complement(s.Gperp);
  return s;
}

/// θ with cos²θ = β(1-α) / (α(1-β)).
inline double analytic_cos2(double alpha, double beta) {
  require_overlap(alpha, beta);
  return beta * (1.0 - alpha) / (alpha * (1.0 - beta));
}

inline double analytic_angle(double alpha, double beta) { return std::acos(std::sqrt(analytic_cos2(alpha, beta))); }

namespace detail {

/// Largest |(K u)_i| over nodes other than `skip`, relative to ||K u||_inf.
/// (K u)_i is the jump of u' at node i, so zero means u is linear there.
inline double kink_residual(const Matrix& K, const Vector& u, Index first, Index last, Index skip) {
  const Vector ku = K * u;
  const double scale = std::max(ku.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (Index i = first; i < last; ++i)
    if (i != skip) worst = std::max(worst, std::abs(ku(i)));
  return worst / scale;
}

}  // namespace detail

/// One angle below π/2 equal to the analytic angle, every other angle π/2,
/// and principal vectors with the expected kinks.
inline CheckResult angle_structure_check(const DdmSpaces& s, double tol = 1e-8) {
  CheckResult r;
  const auto m = s.K.rows();
  const double theta = analytic_angle(s.config.alpha, s.config.beta);
  const AngleMultiset between = angles_between(s.F, s.G);
  int acute = 0;
  double acute_value = kHalfPi;
  for (const auto& c : between.entries())
    if (c.value < kHalfPi - tol) {
      acute += c.mult;
      acute_value = c.value;
    }
  r.add("exactly one angle below pi/2", std::abs(acute - 1.0), 0.0);
  r.add("that angle equals the analytic angle", std::abs(acute_value - theta), tol);
  r.add("remaining angles equal pi/2", std::abs(between.multiplicity_of(kHalfPi, tol) - (between.total() - 1.0)), 0.0);
  const AngleMultiset directed = angles_from_to(s.F, s.G);
  r.add("from(F,G) has the same acute angle, rest pi/2",
        std::abs(directed.multiplicity_of(acute_value, tol) - 1.0) +
            std::abs(directed.multiplicity_of(kHalfPi, tol) - (directed.total() - 1.0)),
        0.0);

  double linear = 0.0;
  for (Index j = 0; j < s.F.dim(); ++j)
    linear = std::max(linear, detail::kink_residual(s.K, s.F.basis().col(j), 0, s.alpha_node, -1));
  r.add("F linear on [0, alpha]", linear, tol);

  const auto pairs = principal_pairs(s.F, s.G);
  if (!pairs.empty() && pairs.front().theta < kHalfPi - tol) {
    const PrincipalPair& p = pairs.front();
    const Vector f = p.U.basis().col(0);
    const Vector g = p.V.basis().col(0);
    r.add("f linear on [0, alpha] and [alpha, 1]", detail::kink_residual(s.K, f, 0, m, s.alpha_node), tol);
    r.add("g linear on [0, beta] and [beta, 1]", detail::kink_residual(s.K, g, 0, m, s.beta_node), tol);
    const Subspace Fr = subtract(s.F, p.U);
    const Subspace Gr = subtract(s.G, p.V);
    if (!Fr.is_trivial() && !Gr.is_trivial())
      r.add("F - span f orthogonal to G - span g", norm2(Fr.metric_basis().transpose() * Gr.metric_basis()), tol);
  } else {
    r.add_flag("principal pair below pi/2 exists", false);
  }

  Matrix both(m, s.Fperp.dim() + s.Gperp.dim());
  both << s.Fperp.metric_basis(), s.Gperp.metric_basis();
  const Matrix Q = qr_orthonormalize(both, 1e-12);
  r.add("F^perp + G^perp is the whole space", norm2(Q * Q.transpose() - Matrix::Identity(m, m)), 1e-10);
  return r;
}

/// Matrix of the solver operator in its own coordinates.
inline Matrix ddm_operator(const DdmSpaces& s, Variant v) {
  const Matrix& QF = s.F.metric_basis();
  const Matrix& QG = s.G.metric_basis();
  if (v == Variant::Multiplicative) {
    const Matrix C = QF.transpose() * QG;
    return Matrix::Identity(QF.cols(), QF.cols()) - C * C.transpose();
  }
  return metric_projector(s.Fperp) + metric_projector(s.Gperp);
}

/// Spectrum predicted from the analytic angle:
///   multiplicative {sin²θ} ∪ {1 × (dim F - 1)},
///   additive {1 - cos θ, 1 + cos θ} with 2 on F⊥ ∩ G⊥, 1 on F ∩ G⊥ and
///   F⊥ ∩ G, 0 on F ∩ G.
inline std::vector<double> ddm_predicted_spectrum(const DdmSpaces& s, Variant v) {
  const double theta = analytic_angle(s.config.alpha, s.config.beta);
  const double c = std::cos(theta);
  std::vector<double> out;
  if (v == Variant::Multiplicative) {
    out.push_back(std::sin(theta) * std::sin(theta));
    out.insert(out.end(), static_cast<std::size_t>(s.F.dim() - 1), 1.0);
  } else {
    const FivePartsDims d = five_parts(s.F, s.G).dims;
    out.push_back(1.0 - c);
    out.push_back(1.0 + c);
    out.insert(out.end(), static_cast<std::size_t>(d.m11), 2.0);
    out.insert(out.end(), static_cast<std::size_t>(d.m01 + d.m10), 1.0);
    out.insert(out.end(), static_cast<std::size_t>(d.m00), 0.0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Seeded Gaussian vector projected onto F, in original coordinates.
inline Vector ddm_default_start(const DdmSpaces& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector x(s.K.rows());
  for (Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  return projector(s.F) * x;
}

struct DdmRun {
  SolveTrace trace;
  std::vector<double> spectrum;   // computed, ascending
  std::vector<double> predicted;  // from the analytic angle, ascending
  double spectrum_mismatch = 0.0;
  /// Eigenvalues of A below 1e-8 (reported, not assumed).
  Index null_dim = 0;
};

inline DdmRun run_experiment(const DdmSpaces& s, Method method, Variant variant, double tol, int max_iter,
                             std::optional<Vector> e0 = std::nullopt, std::uint64_t seed = 1) {
  DdmRun run;
  AltProblem problem{variant, s.F, s.G, e0 ? *e0 : ddm_default_start(s, seed)};
  run.trace = solve(problem, tol, max_iter, method);
  const Vector eig = sym_eigenvalues(ddm_operator(s, variant));
  run.spectrum.assign(eig.data(), eig.data() + eig.size());
  run.predicted = ddm_predicted_spectrum(s, variant);
  run.spectrum_mismatch = sorted_mismatch(run.spectrum, run.predicted);
  for (double x : run.spectrum)
    if (std::abs(x) <= 1e-8) ++run.null_dim;
  return run;
}

/// ||e_k|| / ||e_{k-1}|| of the alternating projections after `steps`
/// iterations from e0 ∈ F.
inline double richardson_factor(const DdmSpaces& s, const Vector& e0, int steps) {
  const Matrix& QF = s.F.metric_basis();
  const Matrix& QG = s.G.metric_basis();
  const Matrix C = QF.transpose() * QG;
  Vector y = QF.transpose() * s.ip->to_metric(e0);
  double prev = y.norm();
  double factor = 0.0;
  for (int k = 0; k < steps; ++k) {
    y = C * (C.transpose() * y);
    const double now = y.norm();
    // Keep the last ratio measured away from underflow.
    if (prev > 1e-250) factor = now / prev;
    prev = now;
  }
  return factor;
}

struct DdmSummary {
  double alpha = 0.0;
  double beta = 0.0;
  double h = 0.0;  // longest element
  double cos2_analytic = 0.0;
  double cos2_numeric = 0.0;
  double richardson_factor = 0.0;
  std::optional<int> cg_iters_mult;
  std::optional<int> cg_iters_add;
  Index null_dim_add = 0;
  double spectrum_mismatch_mult = 0.0;
  double spectrum_mismatch_add = 0.0;
};

struct DdmOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  int warmup = 50;
  std::uint64_t seed = 1;
};

inline DdmSummary summarize(const DdmSpaces& s, const DdmOptions& opt = {}) {
  DdmSummary out;
  out.alpha = s.config.alpha;
  out.beta = s.config.beta;
  out.h = *std::max_element(s.h.begin(), s.h.end());
  out.cos2_analytic = analytic_cos2(s.config.alpha, s.config.beta);
  const DirectedRaw raw = directed_raw(s.F, s.G);
  out.cos2_numeric = raw.cos.front() * raw.cos.front();
  const Vector e0 = ddm_default_start(s, opt.seed);
  out.richardson_factor = richardson_factor(s, e0, opt.warmup);
  const DdmRun mult = run_experiment(s, Method::CG, Variant::Multiplicative, opt.tol, opt.max_iter, e0);
  const DdmRun add = run_experiment(s, Method::CG, Variant::Additive, opt.tol, opt.max_iter, e0);
  out.cg_iters_mult = mult.trace.iterations_to_tol;
  out.cg_iters_add = add.trace.iterations_to_tol;
  out.null_dim_add = add.null_dim;
  out.spectrum_mismatch_mult = mult.spectrum_mismatch;
  out.spectrum_mismatch_add = add.spectrum_mismatch;
  return out;
}

}  // namespace pangles
