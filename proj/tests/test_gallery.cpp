#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "relanosov/dynamics.hpp"
#include "relanosov/error.hpp"
#include "relanosov/gallery.hpp"
#include "support.hpp"

using namespace relanosov;

namespace {

Matrix plain(const MarkedGroup& g, const Word& w) {
  Matrix m = Matrix::Identity(g.dim(), g.dim());
  for (Letter x : w) m = m * g.image(x);
  return m;
}

// Forward error of a product is governed by the product of factor norms.
double norm_product(const MarkedGroup& g, const Word& w) {
  double p = 1.0;
  for (Letter x : w) p *= operator_norm(g.image(x));
  return p;
}

bool close(const Matrix& a, const Matrix& b, double tol = 1e-12) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

TEST_CASE("cusped item") {
  const auto c = make_cusped_free_group();
  const auto& g = c.group;
  CHECK(g.dim() == 2);
  CHECK(g.peripherals().size() == 3);
  for (const auto& p : g.peripherals()) CHECK(std::abs(plain(g, p.generator()).trace()) == 2.0);
  CHECK(plain(g, Word{1}).trace() == Complex(2.0));
  CHECK(close(evaluate(g, Word{-1, 2}).value(), from_rows({{-3, -2}, {2, 1}})));
  CHECK(close(evaluate(g, Word{1, 2}).value(), from_rows({{5, 2}, {2, 1}})));
  CHECK(plain(g, Word{1, 2}).trace().real() == 6.0);
  CHECK(c.expected == Tag::AnosovConsistent);
}

TEST_CASE("Schottky item") {
  const auto s = make_schottky();
  const auto sd = singular_data(evaluate(s.group, Word{1}));
  CHECK(sd.log_sigma(0) == doctest::Approx(std::log(4.0)));
  CHECK(sd.log_sigma(1) == doctest::Approx(-std::log(4.0)));
  CHECK(s.freeness_margin > 1e-6);
  std::size_t words = 0;
  for (int r = 0; r <= 6; ++r) words += enumerate_sphere(s.group, r).size();
  CHECK(words == 1457);
  CHECK_THROWS_AS(make_schottky(1.0), Error);
  try {
    make_schottky(1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FreenessCheckFailed);
  }
  CHECK_THROWS_AS(make_schottky(-2.0), Error);
}

TEST_CASE("direct sum item") {
  const auto x = make_cusped_free_group();
  const auto y = make_schottky();
  const auto ds = make_direct_sum(x, y);
  CHECK(ds.group.dim() == 4);
  CHECK(ds.k == 2);
  CHECK(ds.expected == Tag::NonAnosovConsistent);
  CHECK(ds.group.peripherals().size() == 3);
  for (int i = 1; i <= 2; ++i) {
    const Matrix m = ds.group.image(i);
    CHECK(close(m.topLeftCorner(2, 2), x.group.image(i)));
    CHECK(close(m.bottomRightCorner(2, 2), y.group.image(i)));
    CHECK(m.topRightCorner(2, 2).isZero(0.0));
    CHECK(m.bottomLeftCorner(2, 2).isZero(0.0));
  }
  // Singular values of a power are the sorted union of the block ones.
  for (long long n : {1LL, 5LL, 100LL}) {
    const auto s = singular_data(power(ds.group, Word{1}, n));
    const double par = std::asinh(double(n));  // [[1,2n],[0,1]]: sigma_1 = n + sqrt(n^2 + 1)
    std::vector<double> expect{n * std::log(4.0), par, -par, -n * std::log(4.0)};
    std::sort(expect.rbegin(), expect.rend());
    for (int i = 0; i < 4; ++i) CHECK(s.log_sigma(i) == doctest::Approx(expect[i]).epsilon(1e-12));
  }
  const MarkedGroup three({Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, Field::Real);
  CHECK_THROWS_AS(make_direct_sum(x, GalleryItem{"three", three, 1, std::nullopt, "", {2}, 0.0}), Error);
}

TEST_CASE("induced item: rewriting rule on the swap cover") {
  std::mt19937_64 rng(31);
  const auto t = index_two_swap_table(2);
  const MarkedGroup rho1({testing_support::random_unit_det(2, rng), testing_support::random_unit_det(2, rng),
                          testing_support::random_unit_det(2, rng)},
                         Field::Real);
  const auto item = make_induced(rho1, t);
  const auto& g = item.group;
  CHECK(g.dim() == 4);
  CHECK(item.k == 2);
  auto basis_image = [&](const Word& w) {
    const auto& b = t.schreier_basis();
    const auto idx = std::find(b.begin(), b.end(), w) - b.begin();
    return rho1.image(static_cast<int>(idx) + 1);
  };
  const Matrix a = g.image(1);
  CHECK(a.topLeftCorner(2, 2).isZero(0.0));
  CHECK(a.bottomRightCorner(2, 2).isZero(0.0));
  CHECK(close(a.topRightCorner(2, 2), basis_image(Word{1, 1})));
  CHECK(close(a.bottomLeftCorner(2, 2), Matrix::Identity(2, 2)));
  CHECK(close(plain(g, Word{}), Matrix::Identity(4, 4)));

  // An element of the subgroup: blocks rho1(alpha_i^-1 eta alpha_i).
  const Word eta{-1, 2};
  const Matrix m = plain(g, eta);
  CHECK(m.topRightCorner(2, 2).isZero(0.0));
  CHECK(m.bottomLeftCorner(2, 2).isZero(0.0));
  CHECK(close(m.topLeftCorner(2, 2), basis_image(Word{-1, 2})));
  CHECK(close(m.bottomRightCorner(2, 2), basis_image(Word{1, 1}).inverse() * basis_image(Word{2, 1}), 1e-10));

  const MarkedGroup wrong({Matrix::Identity(2, 2)}, Field::Real);
  CHECK_THROWS_AS(make_induced(wrong, t), Error);
}

TEST_CASE("induced item: homomorphism and block structure on samples") {
  const auto item = make_induced_mixed();
  const auto& g = item.group;
  const auto t = index_two_swap_table(2);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Word u = testing_support::random_word(2, 1 + rng() % 12, rng);
    const Word v = testing_support::random_word(2, 1 + rng() % 12, rng);
    const Matrix uv = evaluate(g, reduce_word(concat(u, v))).value();
    const Matrix mu = evaluate(g, u).value(), mv = evaluate(g, v).value();
    const double len = static_cast<double>(u.size() + v.size());
    CHECK((uv - mu * mv).cwiseAbs().maxCoeff() <= 1e-14 * len * norm_product(g, concat(u, v)));
    // The block pattern is the permutation of the coset action.
    const Matrix m = plain(g, u);
    for (int i = 0; i < 2; ++i) {
      const int j = t.act(u, i);
      for (int r = 0; r < 2; ++r) CHECK(m.block(2 * r, 2 * i, 2, 2).isZero(0.0) == (r != j));
    }
  }
  int checked = 0;
  while (checked < 100) {
    const Word w = testing_support::random_word(2, 2 + rng() % 10, rng);
    if (!t.in_subgroup(w)) continue;
    const Matrix m = plain(g, w);
    CHECK(m.topRightCorner(2, 2).isZero(0.0));
    CHECK(m.bottomLeftCorner(2, 2).isZero(0.0));
    ++checked;
  }
}

TEST_CASE("peripheral structure reports") {
  for (const auto& ps : peripheral_structure_report(make_cusped_free_group())) {
    REQUIRE(ps.blocks.size() == 1);
    CHECK(ps.blocks[0].kind == BlockKind::Parabolic);
  }
  for (const auto& ps : peripheral_structure_report(make_schottky())) {
    CHECK(ps.blocks[0].kind == BlockKind::Hyperbolic);
  }
  const auto ind = peripheral_structure_report(make_induced_mixed());
  REQUIRE(ind.size() == 1);
  int parabolic = 0;
  for (const auto& b : ind[0].blocks) parabolic += b.kind == BlockKind::Parabolic;
  CHECK(parabolic == 1);
  CHECK(ind[0].blocks.size() == 2);

  for (const auto& ps : peripheral_structure_report(make_gallery_item("direct-sum"))) {
    REQUIRE(ps.blocks.size() == 2);
    CHECK(ps.blocks[0].kind == BlockKind::Parabolic);
    CHECK(ps.blocks[1].kind == BlockKind::Hyperbolic);
  }
  auto bad = make_schottky();
  bad.block_sizes = {1, 1};
  CHECK_THROWS_AS(peripheral_structure_report(bad), Error);
  const MarkedGroup rot({from_rows({{0, -1}, {1, 0}})}, Field::Real);
  const auto r = peripheral_structure_report(GalleryItem{"rot", rot, 1, std::nullopt, "", {2}, 0.0});
  CHECK(r[0].blocks[0].kind == BlockKind::EllipticOrOther);
}

TEST_CASE("gallery registry") {
  for (const auto& name : gallery_names()) {
    const auto item = make_gallery_item(name);
    CHECK(item.name == name);
    CHECK(2 * item.k <= item.group.dim());
  }
  CHECK_THROWS_AS(make_gallery_item("nope"), Error);
}

TEST_CASE("gallery items are homomorphisms on samples") {
  std::mt19937_64 rng(5);
  for (const auto& name : gallery_names()) {
    const auto& g = make_gallery_item(name).group;
    for (int trial = 0; trial < 200; ++trial) {
      const Word u = testing_support::random_word(g.rank(), 1 + rng() % 10, rng);
      const Word v = testing_support::random_word(g.rank(), 1 + rng() % 10, rng);
      const Matrix uv = evaluate(g, reduce_word(concat(u, v))).value();
      const Matrix mu = evaluate(g, u).value(), mv = evaluate(g, v).value();
      const double len = static_cast<double>(u.size() + v.size());
      CHECK((uv - mu * mv).cwiseAbs().maxCoeff() <= 1e-14 * len * norm_product(g, concat(u, v)));
    }
  }
}
