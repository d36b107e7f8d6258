#pragma once

#include <memory>
#include <utility>

#include "pangles/numkit.hpp"

namespace pangles {

/// Intersection threshold: a direction of F lies in G when its sine to G is
/// at most this value, and is orthogonal to G when its cosine is.
inline constexpr double kIntersectTol = 1e-8;

/// Euclidean or weighted (x, y)_K = x^T K y inner product on R^n.
///
/// Weighted products are handled by the change of metric y = R x with
/// R^T R = K. Every algorithm in the library runs on Euclidean
/// "metric coordinates"; only construction and reporting touch K.
class InnerProduct {
 public:
  static std::shared_ptr<const InnerProduct> euclidean(Index n) {
    return std::shared_ptr<const InnerProduct>(new InnerProduct(n));
  }

  static std::shared_ptr<const InnerProduct> weighted(const Matrix& K) {
    Matrix R = cholesky(K);
    return std::shared_ptr<const InnerProduct>(new InnerProduct(K, std::move(R)));
  }

  Index dim() const { return n_; }
  bool is_weighted() const { return weighted_; }

  /// K (identity for the Euclidean product).
  Matrix gram() const { return weighted_ ? K_ : Matrix::Identity(n_, n_); }
  /// Upper Cholesky factor R of K (identity for the Euclidean product).
  Matrix factor() const { return weighted_ ? R_ : Matrix::Identity(n_, n_); }

  Matrix to_metric(const Matrix& X) const { return weighted_ ? Matrix(R_ * X) : X; }
  Matrix from_metric(const Matrix& Y) const {
    if (!weighted_) return Y;
    return R_.triangularView<Eigen::Upper>().solve(Y);
  }

  double dot(const Vector& x, const Vector& y) const { return weighted_ ? x.dot(K_ * y) : x.dot(y); }
  double norm(const Vector& x) const { return std::sqrt(std::max(dot(x, x), 0.0)); }

  bool same_as(const InnerProduct& other) const {
    if (this == &other) return true;
    if (n_ != other.n_ || weighted_ != other.weighted_) return false;
    return !weighted_ || K_ == other.K_;
  }

 private:
  explicit InnerProduct(Index n) : n_(n) {}
  InnerProduct(Matrix K, Matrix R) : n_(K.rows()), weighted_(true), K_(std::move(K)), R_(std::move(R)) {}

  Index n_ = 0;
  bool weighted_ = false;
  Matrix K_;
  Matrix R_;
};

using InnerProductPtr = std::shared_ptr<const InnerProduct>;

/// A linear subspace of R^n, stored as a basis orthonormal in the active
/// inner product. The Euclidean-orthonormal image R * basis is cached.
class Subspace {
 public:
  /// Span of the columns of A. Throws ZeroSpan when the numerical rank is 0.
  static Subspace from_spanning(const Matrix& A, InnerProductPtr ip, double tol = kRankTol) {
    if (A.rows() != ip->dim())
      throw Error(ErrorCode::DimensionMismatch, "spanning set has " + std::to_string(A.rows()) +
                                                    " rows, inner product has dimension " +
                                                    std::to_string(ip->dim()));
    require_finite(A, "spanning set");
    Matrix Q = qr_orthonormalize(ip->to_metric(A), tol);
    if (Q.cols() == 0) throw Error(ErrorCode::ZeroSpan, "all spanning columns are numerically zero");
    return from_metric_basis(std::move(Q), std::move(ip));
  }

  static Subspace from_spanning(const Matrix& A, double tol = kRankTol) {
    return from_spanning(A, InnerProduct::euclidean(A.rows()), tol);
  }

  /// Q must have Euclidean-orthonormal columns in metric coordinates.
  static Subspace from_metric_basis(Matrix Q, InnerProductPtr ip) {
    Subspace s;
    s.basis_ = ip->from_metric(Q);
    s.metric_ = std::move(Q);
    s.ip_ = std::move(ip);
    return s;
  }

  static Subspace trivial(InnerProductPtr ip) {
    const Index n = ip->dim();
    return from_metric_basis(Matrix(n, 0), std::move(ip));
  }

  static Subspace whole(InnerProductPtr ip) {
    const Index n = ip->dim();
    return from_metric_basis(Matrix::Identity(n, n), std::move(ip));
  }

  Index ambient_dim() const { return metric_.rows(); }
  Index dim() const { return metric_.cols(); }
  bool is_trivial() const { return dim() == 0; }

  const Matrix& basis() const { return basis_; }
  const Matrix& metric_basis() const { return metric_; }
  const InnerProductPtr& inner_product() const { return ip_; }

 private:
  Subspace() = default;

  Matrix basis_;
  Matrix metric_;
  InnerProductPtr ip_;
};

inline void require_same_space(const Subspace& F, const Subspace& G) {
  if (F.ambient_dim() != G.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "subspaces live in spaces of different dimension");
  if (!F.inner_product()->same_as(*G.inner_product()))
    throw Error(ErrorCode::DimensionMismatch, "subspaces use different inner products");
}

inline void require_nontrivial(const Subspace& S, const char* name) {
  if (S.is_trivial()) throw Error(ErrorCode::TrivialSubspace, std::string(name) + " is the trivial subspace");
}

/// Projector in metric coordinates: Q Q^T, symmetric.
inline Matrix metric_projector(const Subspace& S) { return S.metric_basis() * S.metric_basis().transpose(); }

/// Projector in original coordinates: B B^T K, K-selfadjoint and idempotent.
inline Matrix projector(const Subspace& S) {
  const auto& ip = *S.inner_product();
  if (!ip.is_weighted()) return S.basis() * S.basis().transpose();
  return S.basis() * (S.basis().transpose() * ip.gram());
}

inline Subspace orthogonal_complement(const Subspace& S) {
  return Subspace::from_metric_basis(orthonormal_complement(S.metric_basis()), S.inner_product());
}

namespace detail {

/// Columns of Q_F Y, where Y collects right singular vectors of M whose
/// singular values (padded with zeros up to M.cols()) are <= tol.
inline Matrix small_singular_directions(const Matrix& M, double tol) {
  const Index k = M.cols();
  if (k == 0) return Matrix(0, 0);
  Svd d = svd(M);
  Matrix Y(k, 0);
  for (Index j = 0; j < k; ++j) {
    const double s = j < d.S.size() ? d.S(j) : 0.0;
    if (s <= tol) {
      Y.conservativeResize(k, Y.cols() + 1);
      Y.col(Y.cols() - 1) = d.V.col(j);
    }
  }
  return Y;
}

/// Coordinates (in the F basis) of the directions of F lying in G: those
/// with sine to G at most tol.
inline Matrix intersection_coords(const Matrix& QF, const Matrix& QG, double tol) {
  const Matrix residual = QF - QG * (QG.transpose() * QF);
  return small_singular_directions(residual, tol);
}

/// Orthonormal complement of range(Y) inside R^{Y.rows()}.
inline Matrix complement_coords(const Matrix& Y, Index k) {
  if (Y.cols() == 0) return Matrix::Identity(k, k);
  Matrix Qy = qr_orthonormalize(Y, 1e-12);
  return orthonormal_complement(Qy);
}

}  // namespace detail

/// F ∩ G, detected as the directions of F whose sine to G is at most tol.
inline Subspace intersect(const Subspace& F, const Subspace& G, double tol = kIntersectTol) {
  require_same_space(F, G);
  if (F.is_trivial() || G.is_trivial()) return Subspace::trivial(F.inner_product());
  const Matrix Y = detail::intersection_coords(F.metric_basis(), G.metric_basis(), tol);
  if (Y.cols() == 0) return Subspace::trivial(F.inner_product());
  return Subspace::from_metric_basis(F.metric_basis() * Y, F.inner_product());
}

/// Part of `within` orthogonal to `removed` (both subspaces of the same
/// space, removed ⊆ within up to tolerance): within ⊖ removed.
inline Subspace subtract(const Subspace& within, const Subspace& removed) {
  require_same_space(within, removed);
  if (removed.is_trivial()) return within;
  const Matrix Y = within.metric_basis().transpose() * removed.metric_basis();
  const Matrix C = detail::complement_coords(Y, within.dim());
  return Subspace::from_metric_basis(within.metric_basis() * C, within.inner_product());
}

/// Orthogonal direct sum of mutually orthogonal subspaces.
inline Subspace direct_sum(const Subspace& A, const Subspace& B) {
  require_same_space(A, B);
  Matrix Q(A.ambient_dim(), A.dim() + B.dim());
  Q << A.metric_basis(), B.metric_basis();
  if (Q.cols() == 0) return Subspace::trivial(A.inner_product());
  return Subspace::from_metric_basis(qr_orthonormalize(Q, 1e-12), A.inner_product());
}

struct FivePartsDims {
  Index m00 = 0, m01 = 0, m10 = 0, m11 = 0, m = 0;
  Index mF = 0, mFperp = 0, mG = 0, mGperp = 0;
};

/// H = M00 ⊕ M01 ⊕ M10 ⊕ M11 ⊕ M, with M = M_F ⊕ M_F⊥ = M_G ⊕ M_G⊥.
struct FiveParts {
  Subspace m00, m01, m10, m11;
  Subspace mF, mFperp, mG, mGperp;
  FivePartsDims dims;
};

inline FiveParts five_parts(const Subspace& F, const Subspace& G, double tol = kIntersectTol) {
  require_same_space(F, G);
  const Subspace Fp = orthogonal_complement(F);
  const Subspace Gp = orthogonal_complement(G);
  Subspace m00 = intersect(F, G, tol);
  Subspace m01 = intersect(F, Gp, tol);
  Subspace m10 = intersect(Fp, G, tol);
  Subspace m11 = intersect(Fp, Gp, tol);
  Subspace mF = subtract(F, direct_sum(m00, m01));
  Subspace mFperp = subtract(Fp, direct_sum(m10, m11));
  Subspace mG = subtract(G, direct_sum(m00, m10));
  Subspace mGperp = subtract(Gp, direct_sum(m01, m11));
  FivePartsDims d;
  d.m00 = m00.dim();
  d.m01 = m01.dim();
  d.m10 = m10.dim();
  d.m11 = m11.dim();
  d.mF = mF.dim();
  d.mFperp = mFperp.dim();
  d.mG = mG.dim();
  d.mGperp = mGperp.dim();
  d.m = d.mF + d.mFperp;
  return FiveParts{std::move(m00), std::move(m01), std::move(m10), std::move(m11),
                   std::move(mF),  std::move(mFperp), std::move(mG), std::move(mGperp), d};
}

/// True iff all four corner intersections are null-dimensional.
inline bool in_generic_position(const Subspace& F, const Subspace& G, double tol = kIntersectTol) {
  require_same_space(F, G);
  const Subspace Fp = orthogonal_complement(F);
  const Subspace Gp = orthogonal_complement(G);
  return intersect(F, G, tol).is_trivial() && intersect(F, Gp, tol).is_trivial() &&
         intersect(Fp, G, tol).is_trivial() && intersect(Fp, Gp, tol).is_trivial();
}

}  // namespace pangles
