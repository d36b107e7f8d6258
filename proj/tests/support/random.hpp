#pragma once

#include <random>
#include <vector>

#include "pangles/pangles.hpp"

namespace pangles::testing {

using Rng = std::mt19937_64;

inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) A(i, j) = normal(rng);
  return A;
}

inline Vector gaussian_vector(Index n, Rng& rng) { return gaussian(n, 1, rng).col(0); }

inline int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Haar-distributed orthogonal matrix.
inline Matrix random_orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix R = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

inline Subspace random_subspace(Index n, Index k, Rng& rng) { return Subspace::from_spanning(gaussian(n, k, rng)); }

inline Matrix random_symmetric(Index n, Rng& rng) {
  const Matrix M = gaussian(n, n, rng);
  return 0.5 * (M + M.transpose());
}

inline Matrix random_spd(Index n, Rng& rng) {
  const Matrix M = gaussian(n, n, rng);
  return M.transpose() * M / static_cast<double>(n) + Matrix::Identity(n, n);
}

struct PlantedPair {
  Subspace F;
  Subspace G;
  /// Corner dimensions as built; m11 includes unused columns.
  FivePartsDims dims;
  /// Generic angles, ascending, with repetition.
  std::vector<double> angles;
};

/// F and G assembled from a rotated orthonormal basis: m00 shared columns,
/// m01 columns only in F, m10 only in G, one 2-column block per generic
/// angle, and every remaining column in neither.
inline PlantedPair planted_pair(Index n, Index m00, Index m01, Index m10, std::vector<double> angles, Rng& rng,
                                InnerProductPtr ip = nullptr) {
  const auto blocks = static_cast<Index>(angles.size());
  const Index used = m00 + m01 + m10 + 2 * blocks;
  if (used > n) throw std::invalid_argument("planted pair does not fit");
  const Matrix Q = random_orthogonal(n, rng);
  Matrix BF(n, m00 + m01 + blocks);
  Matrix BG(n, m00 + m10 + blocks);
  Index c = 0, f = 0, g = 0;
  for (Index i = 0; i < m00; ++i, ++c) {
    BF.col(f++) = Q.col(c);
    BG.col(g++) = Q.col(c);
  }
  for (Index i = 0; i < m01; ++i, ++c) BF.col(f++) = Q.col(c);
  for (Index i = 0; i < m10; ++i, ++c) BG.col(g++) = Q.col(c);
  for (double t : angles) {
    BF.col(f++) = Q.col(c);
    BG.col(g++) = std::cos(t) * Q.col(c) + std::sin(t) * Q.col(c + 1);
    c += 2;
  }
  if (!ip) ip = InnerProduct::euclidean(n);
  // The columns above are orthonormal in metric coordinates.
  PlantedPair p{Subspace::from_metric_basis(qr_orthonormalize(BF, 1e-12), ip),
                Subspace::from_metric_basis(qr_orthonormalize(BG, 1e-12), ip),
                {},
                std::move(angles)};
  if (BF.cols() == 0 || BG.cols() == 0) throw std::invalid_argument("planted pair has a trivial subspace");
  std::sort(p.angles.begin(), p.angles.end());
  p.dims.m00 = m00;
  p.dims.m01 = m01;
  p.dims.m10 = m10;
  p.dims.m11 = n - used;
  return p;
}

/// Random planted pair with nontrivial F, G and proper complements. Angles
/// are drawn from a small pool so that repeated values occur.
inline PlantedPair random_planted_pair(Index n, Rng& rng) {
  for (;;) {
    const Index blocks = uniform_int(0, static_cast<int>(n / 2), rng);
    Index rest = n - 2 * blocks;
    const Index m00 = uniform_int(0, static_cast<int>(std::min<Index>(rest, 3)), rng);
    rest -= m00;
    const Index m01 = uniform_int(0, static_cast<int>(std::min<Index>(rest, 3)), rng);
    rest -= m01;
    const Index m10 = uniform_int(0, static_cast<int>(std::min<Index>(rest, 3)), rng);
    std::vector<double> pool;
    const int distinct = uniform_int(1, 4, rng);
    for (int i = 0; i < distinct; ++i) pool.push_back(uniform(0.05, kHalfPi - 0.05, rng));
    std::vector<double> angles;
    for (Index i = 0; i < blocks; ++i) angles.push_back(pool[static_cast<std::size_t>(uniform_int(0, distinct - 1, rng))]);
    const Index kF = m00 + m01 + blocks;
    const Index kG = m00 + m10 + blocks;
    if (kF == 0 || kG == 0 || kF == n || kG == n) continue;
    return planted_pair(n, m00, m01, m10, std::move(angles), rng);
  }
}

/// Either a generic random pair or a planted one, dims in [1, n-1].
inline std::pair<Subspace, Subspace> random_pair(Index n, Rng& rng) {
  if (uniform_int(0, 1, rng) == 0) {
    const Index kF = uniform_int(1, static_cast<int>(n - 1), rng);
    const Index kG = uniform_int(1, static_cast<int>(n - 1), rng);
    return {random_subspace(n, kF, rng), random_subspace(n, kG, rng)};
  }
  PlantedPair p = random_planted_pair(n, rng);
  return {p.F, p.G};
}

}  // namespace pangles::testing
