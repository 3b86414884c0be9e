#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "relanosov/dynamics.hpp"
#include "relanosov/error.hpp"
#include "support.hpp"

using namespace relanosov;
using testing_support::projector_angle;

namespace {

MarkedGroup congruence_pair() {
  return MarkedGroup({from_rows({{1, 2}, {0, 1}}), from_rows({{1, 0}, {2, 1}})}, Field::Real);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Largest singular value of [[1, x], [0, 1]].
double parabolic_sigma1(double x) { return (x + std::sqrt(x * x + 4.0)) / 2.0; }

}  // namespace

TEST_CASE("evaluate basic products") {
  const auto g = congruence_pair();
  const auto id = evaluate(g, Word{});
  CHECK(id.log_scale() == 0.0);
  CHECK(max_abs(id.value() - Matrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs(evaluate(g, Word{1, -1}).value() - Matrix::Identity(2, 2)) <= 1e-12);
  CHECK(max_abs(evaluate(g, Word{1, 2}).value() - from_rows({{5, 2}, {2, 1}})) <= 1e-12);
  CHECK(max_abs(evaluate(g, Word{-1, 2}).value() - from_rows({{-3, -2}, {2, 1}})) <= 1e-12);
}

TEST_CASE("renormalization keeps entries in range and preserves zeros") {
  ScaledMatrix m(from_rows({{1024, 0}, {3, 1.0 / 1024}}));
  CHECK(max_abs(m.entries()) >= 1.0);
  CHECK(max_abs(m.entries()) < 2.0);
  CHECK(m.entries()(0, 1) == Complex(0.0, 0.0));
  CHECK(max_abs(m.value() - from_rows({{1024, 0}, {3, 1.0 / 1024}})) <= 1e-12);
}

TEST_CASE("w times w inverse is the identity") {
  std::mt19937_64 rng(1);
  std::vector<Matrix> gens;
  for (int i = 0; i < 3; ++i) {
    Matrix m = Matrix::Identity(3, 3) + 0.1 * testing_support::random_matrix(3, rng);
    gens.push_back(m);
  }
  const MarkedGroup g(gens, Field::Real);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + static_cast<std::size_t>(trial) % 50;
    const Word w = testing_support::random_word(3, len, rng);
    const ScaledMatrix p = evaluate(g, w) * evaluate(g, inverse(w));
    CHECK(max_abs(p.value() - Matrix::Identity(3, 3)) <= 1e-9 * static_cast<double>(len));
  }
}

TEST_CASE("singular data closed forms") {
  const auto s = singular_data(ScaledMatrix(from_rows({{2, 0}, {0, 0.5}})));
  CHECK(s.log_sigma(0) == doctest::Approx(std::log(2.0)));
  CHECK(s.log_sigma(1) == doctest::Approx(-std::log(2.0)));
  CHECK(angle_distance(uk_subspace(s, 1), Subspace::coordinate(2, {0})) <= 1e-14);

  const auto p = singular_data(ScaledMatrix(from_rows({{1, 1}, {0, 1}})));
  CHECK(std::exp(p.log_sigma(0)) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));

  const double th = 0.7;
  const auto r = singular_data(ScaledMatrix(from_rows({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}})));
  CHECK(std::abs(r.log_gap(1)) <= 1e-14);
  CHECK_THROWS_AS(uk_subspace(r, 1), Error);

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(singular_data(ScaledMatrix(bad, 0.0, 0.0)), Error);
}

TEST_CASE("log singular values sum to zero for unit determinant products") {
  // Moderately conditioned products: every singular value stays within
  // double resolution of the largest except possibly the last, which the
  // determinant recovers.
  std::mt19937_64 rng(2);
  for (int d = 2; d <= 5; ++d) {
    std::vector<Matrix> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(Matrix::Identity(d, d) + 0.3 * testing_support::random_matrix(d, rng));
    const MarkedGroup g(gens, Field::Real);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = singular_data(evaluate(g, testing_support::random_word(2, 30, rng)));
      CHECK(std::abs(s.log_sigma.sum()) <= 1e-6);
      const Matrix ut = s.left.adjoint() * s.left;
      CHECK(max_abs(ut - Matrix::Identity(d, d)) <= 1e-9);
      for (int i = 1; i < d; ++i) CHECK(s.log_sigma(i) <= s.log_sigma(i - 1));
    }
  }
}

TEST_CASE("top-k subspaces") {
  const auto u = uk_subspace(ScaledMatrix(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 1.0 / 3}})), 1);
  CHECK(angle_distance(u, Subspace::coordinate(3, {0})) <= 1e-14);

  const double n = 100;
  const auto p = uk_subspace(ScaledMatrix(from_rows({{1, n}, {0, 1}})), 1);
  const double angle = angle_distance(p, Subspace::coordinate(2, {0}));
  CHECK(angle < 0.02);
  // g g^T = [[1 + n^2, n], [n, 1]] has top eigenvector at angle atan(2/n)/2.
  CHECK(std::abs(angle - 0.5 * std::atan(2.0 / n)) <= 1e-12);
}

TEST_CASE("U_{d-k}(g^-1) equals g^-1 U_k(g)^perp") {
  std::mt19937_64 rng(4);
  for (int checked = 0; checked < 1000; ++checked) {
    const int d = 2 + checked % 4;
    const int k = 1 + checked % (d - 1);
    const Matrix m = testing_support::random_gapped(d, k, 10.0, rng);
    const Subspace lhs = u_dk_inverse(ScaledMatrix(m), k);
    // Oracle: top (d-k) left singular vectors of the explicit inverse.
    Eigen::JacobiSVD<Matrix> inv(m.inverse(), Eigen::ComputeFullU);
    const Matrix rhs = inv.matrixU().leftCols(d - k);
    CHECK(projector_angle(lhs.frame(), rhs) < 1e-6);
  }
}

TEST_CASE("BPS bounds") {
  std::mt19937_64 rng(6);
  const ScaledMatrix g(from_rows({{1e3, 0, 0}, {0, 1, 0}, {0, 0, 1e-3}}));
  const auto trivial = check_bps_bounds(g, ScaledMatrix::identity(3), 1);
  CHECK(trivial.lhs1 <= 1e-15);
  CHECK_FALSE(trivial.part2);
  CHECK(trivial.holds());

  Matrix h = Matrix::Identity(3, 3) + 0.01 * testing_support::random_matrix(3, rng);
  const auto near = check_bps_bounds(g, ScaledMatrix(h), 1);
  CHECK(near.holds());
  CHECK(near.rhs1 == doctest::Approx(1e-3 * std::exp(singular_data(ScaledMatrix(h)).log_sigma(0) -
                                                      singular_data(ScaledMatrix(h)).log_sigma(2))));

  int violations = 0, run = 0;
  while (run < 1000) {
    const int d = 2 + run % 4;
    const int k = 1 + run % (d / 2 > 0 ? d / 2 : 1);
    try {
      const auto r = check_bps_bounds(ScaledMatrix(testing_support::random_matrix(d, rng)),
                                      ScaledMatrix(testing_support::random_matrix(d, rng)), k);
      if (!r.holds()) ++violations;
      ++run;
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::NoGap);
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("BPS estimate in radians fails for badly conditioned pairs") {
  // Documented: with rhs above 1 the radian angle can exceed it while the
  // sine stays below.
  std::mt19937_64 rng(6);
  int radian_violations = 0;
  for (int run = 0; run < 5000; ++run) {
    const auto r = check_bps_bounds(ScaledMatrix(testing_support::random_matrix(2, rng)),
                                    ScaledMatrix(testing_support::random_matrix(2, rng)), 1);
    CHECK(r.holds());
    if (r.angle1 > r.rhs1 + 1e-9) ++radian_violations;
  }
  CHECK(radian_violations > 0);
}

TEST_CASE("huge parabolic powers keep both singular values") {
  const auto g = congruence_pair();
  const long long n = 1LL << 30;
  const auto s = singular_data(power(g, Word{1}, n));
  const double x = 2.0 * static_cast<double>(n);
  CHECK(std::abs(s.log_sigma(0) - std::log(parabolic_sigma1(x))) <= 1e-12);
  CHECK(std::abs(s.log_sigma(1) + std::log(parabolic_sigma1(x))) <= 1e-9);
  const auto neg = singular_data(power(g, Word{1}, -n));
  CHECK(std::abs(neg.log_sigma(0) - s.log_sigma(0)) <= 1e-12);
  CHECK(angle_distance(uk_subspace(s, 1), Subspace::coordinate(2, {0})) <= 1e-9);
  CHECK(angle_distance(uk_subspace(neg, 1), Subspace::coordinate(2, {0})) <= 1e-9);
}

TEST_CASE("block products: sorted union of block singular values") {
  Matrix a = Matrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = from_rows({{1, 2}, {0, 1}});
  a.bottomRightCorner(2, 2) = from_rows({{4, 0}, {0, 0.25}});
  const MarkedGroup g({a}, Field::Real);
  REQUIRE(g.blocks().size() == 3);  // the diagonal block splits further
  const auto s = singular_data(power(g, Word{1}, 100));
  const double hyper = 100 * std::log(4.0);
  const double para = std::log(parabolic_sigma1(200.0));
  CHECK(std::abs(s.log_sigma(0) - hyper) <= 1e-9);
  CHECK(std::abs(s.log_sigma(1) - para) <= 1e-12);
  CHECK(std::abs(s.log_sigma(2) + para) <= 1e-12);
  CHECK(std::abs(s.log_sigma(3) + hyper) <= 1e-9);
  // Direct evaluation and powering agree.
  const auto direct = singular_data(evaluate_blocks(g, power(Word{1}, 100)));
  CHECK(max_abs((direct.log_sigma - s.log_sigma).cast<Complex>()) <= 1e-9);
}

TEST_CASE("power splits an element along its own zero pattern") {
  // Single block for the group, but the element is block diagonal.
  Matrix swap = Matrix::Zero(4, 4);
  swap.topRightCorner(2, 2) = from_rows({{1, 2}, {0, 1}});
  swap.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
  const MarkedGroup g({swap}, Field::Real);
  CHECK(g.blocks().size() == 1);
  const auto s = singular_data(power(g, Word{1, 1}, 1LL << 29));
  // (swap^2) = diag(P, P) with P = [[1,2],[0,1]]; its 2^29-th power is diag(P^(2^29), ...).
  const double expect = std::log(parabolic_sigma1(std::ldexp(1.0, 30)));
  CHECK(std::abs(s.log_sigma(0) - expect) <= 1e-12);
  CHECK(std::abs(s.log_sigma(3) + expect) <= 1e-9);
}

TEST_CASE("huge powers of a non-triangular parabolic stay accurate") {
  // a^-1 b for a = [[1,2],[0,1]], b = [[1,0],[2,1]]: -(I + N) with N nilpotent,
  // so its n-th power is (-1)^n (I + nN) with exactly representable entries.
  const Matrix c = from_rows({{-3, -2}, {2, 1}});
  const MarkedGroup g({c}, Field::Real);
  const Matrix N = -c - Matrix::Identity(2, 2);
  for (int e : {10, 20, 26, 28, 30}) {
    const double n = std::ldexp(1.0, e);
    const Matrix exact = Matrix::Identity(2, 2) + n * N;
    Eigen::JacobiSVD<Matrix> svd(exact, Eigen::ComputeFullU);
    const double s1 = svd.singularValues()(0);
    const auto s = singular_data(power(g, Word{1}, 1LL << e));
    // The rotated-back eigenvalue carries one rounding, which the power
    // multiplies by n.
    const double tol = 4.0 * n * std::numeric_limits<double>::epsilon();
    CHECK(std::abs(s.log_sigma(0) - std::log(s1)) <= tol);
    // sigma_2 from a direct SVD is only good to eps * sigma_1 absolutely.
    CHECK(std::abs(s.log_sigma(1) + std::log(s1)) <= tol + 4.0 * s1 * s1 * std::numeric_limits<double>::epsilon());
    // Top direction tends to the image of N, the line through (1, -1).
    const auto u = uk_subspace(s, 1);
    CHECK(angle_distance(u, Subspace(svd.matrixU().col(0))) < 1e-9);
    CHECK(angle_distance(u, Subspace::span({from_rows({{1}, {-1}}).col(0)})) < 1.0 / n);
  }
}

TEST_CASE("images under blocks of very different size keep the small block") {
  // diag(P^n, H^n) with P parabolic and H = diag(4, 1/4): at n = 2^30 the
  // blocks differ by far more than double range.
  const Matrix a = from_rows({{1, 2, 0, 0}, {0, 1, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 0.25}});
  const MarkedGroup g({a}, Field::Real);
  const Subspace v = Subspace::span({from_rows({{1}, {1}, {1}, {1}}).col(0), from_rows({{1}, {-1}, {2}, {3}}).col(0)});
  const Subspace limit = Subspace::coordinate(4, {0, 2});
  double prev = 10.0;
  for (int e : {4, 8, 16, 30}) {
    const auto p = power(g, Word{1}, 1LL << e);
    const Subspace img = image_subspace(p, v);
    const double dist = angle_distance(img, limit);
    // The parabolic coordinate approaches e1 like 1/(2n).
    CHECK(dist < 2.0 / std::ldexp(1.0, e));
    CHECK(dist < prev);
    prev = dist;
  }
  // Graded elimination against a plain matrix agrees with the naive span.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = testing_support::random_unit_det(5, rng);
    const Matrix f = Matrix::Random(5, 2);
    const Subspace naive(m * f);
    CHECK(angle_distance(Subspace(graded_column_basis(m * f)), naive) < 1e-10);
  }
}

TEST_CASE("dense powers with a Jordan block against a high-precision oracle") {
  // M = C diag(J, 3, 1/3) C^-1 with J = [[1,1],[0,1]] and an integer C of
  // determinant 1. Rounding M splits the Jordan pair by about 1e-7, which the
  // exact power of the stored matrix would keep; the oracle is the intended
  // C J^n C^-1 in 400 bits, and power() should recover it by snapping.
  using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;
  using BigMatrix = Eigen::Matrix<Big, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix c = from_rows({{4, 2, 1, 1}, {1, 2, 1, 0}, {2, 1, 3, 2}, {1, 0, 1, 1}});
  REQUIRE(std::abs(c.determinant() - Complex(1.0)) < 1e-12);
  const Matrix j = from_rows({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 1.0 / 3.0}});
  const MarkedGroup g({c * j * c.inverse()}, Field::Real);
  REQUIRE(g.blocks().size() == 1);
  const BigMatrix big_c = c.real().cast<Big>();
  const BigMatrix big_c_inv = big_c.inverse();
  for (int e = 1; e <= 8; ++e) {
    const long long n = 1LL << e;
    BigMatrix jn = BigMatrix::Zero(4, 4);
    jn(0, 0) = jn(1, 1) = 1;
    jn(0, 1) = static_cast<double>(n);
    jn(2, 2) = pow(Big(3), static_cast<int>(n));
    jn(3, 3) = pow(Big(3), -static_cast<int>(n));
    const BigMatrix exact = big_c * jn * big_c_inv;
    Eigen::JacobiSVD<BigMatrix> svd(exact);
    const auto s = singular_data(power(g, Word{1}, n));
    for (int i = 0; i < 4; ++i) {
      const double expect = static_cast<double>(log(svd.singularValues()(i)));
      CHECK(std::abs(s.log_sigma(i) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}
