#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

#include "relanosov/linalg.hpp"
#include "relanosov/word.hpp"

namespace testing_support {

using namespace relanosov;

inline Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = n(rng);
  return m;
}

// Real matrix with determinant one.
inline Matrix random_unit_det(int d, std::mt19937_64& rng) {
  Matrix m = random_matrix(d, rng);
  double det = m.determinant().real();
  if (det < 0) {
    m.col(0) *= -1.0;
    det = -det;
  }
  return m / std::pow(det, 1.0 / d);
}

// Q1 diag(exp(logs)) Q2 with random orthogonal Q1, Q2.
inline Matrix with_singular_values(const Eigen::VectorXd& logs, std::mt19937_64& rng);

inline Matrix random_orthogonal(int d, std::mt19937_64& rng) {
  return Eigen::HouseholderQR<Matrix>(random_matrix(d, rng)).householderQ();
}

inline Matrix with_singular_values(const Eigen::VectorXd& logs, std::mt19937_64& rng) {
  const int d = static_cast<int>(logs.size());
  return random_orthogonal(d, rng) * logs.array().exp().matrix().cast<Complex>().asDiagonal() *
         random_orthogonal(d, rng);
}

// Random matrix whose singular values have ratio at least `ratio` at k.
inline Matrix random_gapped(int d, int k, double ratio, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd logs(d);
  for (int i = 0; i < d; ++i) logs(i) = u(rng) + (i < k ? std::log(ratio) + 2.0 : 0.0);
  std::sort(logs.data(), logs.data() + d, std::greater<>());
  return with_singular_values(logs, rng);
}

// Orthonormal frame of k random columns.
inline Matrix random_frame(int d, int k, std::mt19937_64& rng) {
  Matrix m = random_matrix(d, rng).leftCols(k);
  return Eigen::HouseholderQR<Matrix>(m).householderQ() * Matrix::Identity(d, k);
}

inline Word random_word(int rank, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, 2 * rank);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < length; ++i) {
    const int x = pick(rng);
    out.push_back(x <= rank ? x : -(x - rank));
  }
  return Word(out);
}

// Largest principal angle from the projector difference: ||P_A - P_B||_2 = sin(theta_max).
inline double projector_angle(const Matrix& a, const Matrix& b) {
  const Matrix pa = a * a.adjoint();
  const Matrix pb = b * b.adjoint();
  Eigen::JacobiSVD<Matrix> svd(pa - pb);
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

}  // namespace testing_support
