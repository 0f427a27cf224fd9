#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ned/system.hpp"

namespace ned::testing {

// Bounded, well-conditioned random matrix: Q1 diag(s) Q2 with singular values
// in [lo, hi] and Haar-ish orthogonal factors from QR of Gaussian matrices.
inline Matrix random_matrix(std::mt19937_64& rng, int n, double lo = 0.4, double hi = 2.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  const auto orth = [&] {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    return Matrix(Eigen::HouseholderQR<Matrix>(m).householderQ());
  };
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(u(rng));
  return orth() * s.asDiagonal() * orth();
}

inline MatrixSequence random_table(std::mt19937_64& rng, int n, long k_min, long k_max,
                                   double lo = 0.4, double hi = 2.5) {
  std::vector<Matrix> mats;
  for (long k = k_min; k <= k_max; ++k) mats.push_back(random_matrix(rng, n, lo, hi));
  return MatrixSequence::table(k_min, std::move(mats));
}

inline MatrixSequence constant(const Matrix& a) {
  return MatrixSequence::generator(static_cast<int>(a.rows()), "constant", {},
                                   [a](long) -> Matrix { return a; });
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return norm2(a - b) / std::max(1.0, norm2(b));
}

// Gap between span(a) and span(b): sine of the largest principal angle.
inline double subspace_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = Eigen::HouseholderQR<Matrix>(a).householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix qb = Eigen::HouseholderQR<Matrix>(b).householderQ() * Matrix::Identity(b.rows(), b.cols());
  return norm2(qa * qa.transpose() - qb * qb.transpose());
}

}  // namespace ned::testing
