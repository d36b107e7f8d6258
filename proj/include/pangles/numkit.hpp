#pragma once

// Dense real linear-algebra kernel. Everything above this header talks to
// Eigen only through these types and functions.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "pangles/error.hpp"

namespace pangles {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default relative rank tolerance used by orthonormalization.
inline constexpr double kRankTol = 1e-10;

struct SymEig {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, aligned with eigenvalues
};

struct Svd {
  Matrix U;
  Vector S;  // descending, nonnegative
  Matrix V;
};

inline bool all_finite(const Matrix& A) { return A.allFinite(); }

inline void require_finite(const Matrix& A, const char* what) {
  if (!A.allFinite()) throw Error(ErrorCode::NotFinite, std::string(what) + " has non-finite entries");
}

/// Spectral norm (largest singular value). Zero for empty matrices.
inline double norm2(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

inline double max_abs(const Matrix& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

inline SymEig sym_eig(const Matrix& A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::NonSquare, "sym_eig expects a square matrix");
  require_finite(A, "sym_eig input");
  const double scale = std::max(max_abs(A), 1.0);
  if (max_abs(A - A.transpose()) > 1e-10 * scale)
    throw Error(ErrorCode::NotSymmetric, "sym_eig input is not symmetric");
  if (A.rows() == 0) return {Vector(0), Matrix(0, 0)};
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues only, ascending.
inline Vector sym_eigenvalues(const Matrix& A) {
  if (A.rows() == 0) return Vector(0);
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Full SVD: U is rows x rows, V is cols x cols, S has min(rows, cols) entries.
inline Svd svd(const Matrix& A) {
  require_finite(A, "svd input");
  if (A.size() == 0) {
    return {Matrix::Identity(A.rows(), A.rows()), Vector(0), Matrix::Identity(A.cols(), A.cols())};
  }
  Eigen::JacobiSVD<Matrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Singular values only, descending.
inline Vector singular_values(const Matrix& A) {
  if (A.size() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> dec(A);
  return dec.singularValues();
}

/// Orthonormal basis of range(A). Columns whose pivoted R-diagonal falls
/// below tol * ||A||_F are treated as dependent and dropped.
inline Matrix qr_orthonormalize(const Matrix& A, double tol = kRankTol) {
  require_finite(A, "qr_orthonormalize input");
  if (A.cols() == 0 || A.rows() == 0) return Matrix(A.rows(), 0);
  const double scale = A.norm();
  if (scale == 0.0) return Matrix(A.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  const Matrix& R = qr.matrixQR();
  const Index steps = std::min(A.rows(), A.cols());
  Index rank = 0;
  while (rank < steps && std::abs(R(rank, rank)) >= tol * scale) ++rank;
  Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), rank);
  return Q;
}

/// Orthonormal basis of the orthogonal complement of range(Q), where Q has
/// orthonormal columns.
inline Matrix orthonormal_complement(const Matrix& Q) {
  const Index n = Q.rows();
  const Index k = Q.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k >= n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(Q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

/// Upper-triangular R with R^T R = K.
inline Matrix cholesky(const Matrix& K) {
  if (K.rows() != K.cols()) throw Error(ErrorCode::NonSquare, "cholesky expects a square matrix");
  require_finite(K, "cholesky input");
  const double scale = std::max(max_abs(K), 1.0);
  if (max_abs(K - K.transpose()) > 1e-10 * scale)
    throw Error(ErrorCode::NotSPD, "matrix is not symmetric");
  Eigen::LLT<Matrix> llt(0.5 * (K + K.transpose()));
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotSPD, "nonpositive pivot in Cholesky factorization");
  Matrix R = llt.matrixU();
  for (Index i = 0; i < R.rows(); ++i)
    if (!(R(i, i) > 0.0)) throw Error(ErrorCode::NotSPD, "nonpositive pivot in Cholesky factorization");
  return R;
}

/// Inverse square root of a symmetric positive definite matrix.
inline Matrix inv_sqrt_spd(const Matrix& A) {
  SymEig e = sym_eig(A);
  Vector d = e.eigenvalues.unaryExpr([](double x) { return 1.0 / std::sqrt(x); });
  return e.eigenvectors * d.asDiagonal() * e.eigenvectors.transpose();
}

/// Square root of a symmetric positive semidefinite matrix; tiny negative
/// eigenvalues from rounding are clamped to zero.
inline Matrix sqrt_psd(const Matrix& A) {
  SymEig e = sym_eig(A);
  Vector d = e.eigenvalues.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
  return e.eigenvectors * d.asDiagonal() * e.eigenvectors.transpose();
}

}  // namespace pangles
