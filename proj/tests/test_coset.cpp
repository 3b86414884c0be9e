#include <doctest.h>

#include "relanosov/coset.hpp"
#include "relanosov/error.hpp"
#include "relanosov/group.hpp"
#include "support.hpp"

using namespace relanosov;

TEST_CASE("index-two swap table rewriting examples") {
  const auto t = index_two_swap_table(2);
  CHECK(t.index() == 2);
  CHECK(t.has_schreier_transversal());
  CHECK(t.schreier_basis().size() == 3);

  const auto id = coset_normal_form(t, Word{});
  CHECK(id.coset == 0);
  CHECK(id.ambient.empty());
  CHECK(id.subgroup.empty());

  const auto a = coset_normal_form(t, Word{1});
  CHECK(a.coset == 1);
  CHECK(a.ambient.empty());

  const auto aa = coset_normal_form(t, Word{1, 1});
  CHECK(aa.coset == 0);
  CHECK(aa.ambient == Word{1, 1});
  REQUIRE(aa.subgroup.size() == 1);
  CHECK(t.schreier_basis()[static_cast<std::size_t>(aa.subgroup[0] - 1)] == Word{1, 1});
}

TEST_CASE("coset rewriting round-trips through a matrix representation") {
  std::mt19937_64 rng(11);
  const MarkedGroup g({testing_support::random_unit_det(3, rng), testing_support::random_unit_det(3, rng)},
                      Field::Real);
  // Index 3 table: a acts as the 3-cycle, b as a transposition; transversal {e, a, A}.
  const CosetTable t(2, {{1, 2, 0}, {0, 2, 1}}, {Word{}, Word{1}, Word{-1}});
  CHECK(t.has_schreier_transversal());
  auto eval = [&](const Word& w) {
    Matrix m = Matrix::Identity(3, 3);
    for (Letter x : w) m = m * g.image(x);
    return m;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = testing_support::random_word(2, 1 + trial % 12, rng);
    const int i = trial % 3;
    const auto rw = coset_normal_form(t, w, i);
    CHECK(rw.coset == t.act(w, i));
    const Matrix lhs = eval(w) * eval(t.representative(i));
    const Matrix rhs = eval(t.representative(rw.coset)) * eval(rw.ambient);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
    if (rw.coset == 0 && i == 0) CHECK(t.in_subgroup(w));
  }
}

TEST_CASE("inconsistent tables are rejected") {
  // Not a bijection.
  CHECK_THROWS_AS(CosetTable(1, {{0, 0}}, {Word{}, Word{1}}), Error);
  // Representative does not reach its coset.
  CHECK_THROWS_AS(CosetTable(2, {{1, 0}, {1, 0}}, {Word{}, Word{1, 2}}), Error);
  // First representative must be the identity.
  CHECK_THROWS_AS(CosetTable(1, {{1, 0}}, {Word{1}, Word{}}), Error);
  try {
    CosetTable(1, {{0, 0}}, {Word{}, Word{1}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentTable);
  }
}

TEST_CASE("non-Schreier transversals are detected") {
  // {e, ab} is a valid set of representatives for the swap table on rank 2
  // only if ab reaches coset 1; it does not (ab fixes coset 0), so use {e, aba}.
  const CosetTable t(2, {{1, 0}, {1, 0}}, {Word{}, Word{1, 2, 1}});
  CHECK_FALSE(t.has_schreier_transversal());
}
