#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "relanosov/certify.hpp"
#include "relanosov/cusped.hpp"
#include "relanosov/diagnose.hpp"
#include "relanosov/error.hpp"
#include "relanosov/gallery.hpp"
#include "support.hpp"

using namespace relanosov;

namespace {

MarkedGroup cyclic(const Matrix& m, const std::string& label = "c") {
  return MarkedGroup({m}, Field::Real, PresentationKind::Free, {PeripheralSubgroup::cyclic(label, Word{1})});
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("divergence: Schottky shells") {
  const auto s = make_schottky();
  const auto rep = certify_divergence(s.group, 1, 8);
  CHECK(rep.verdict == DivergenceVerdict::DivergentConsistent);
  REQUIRE(rep.shells.size() == 8);
  for (int r = 1; r <= 8; ++r) {
    CHECK(rep.shells[r - 1].radius == r);
    CHECK(rep.shells[r - 1].count == enumerate_sphere(s.group, r).size());
    CHECK(rep.shells[r - 1].count == static_cast<std::size_t>(4 * std::pow(3, r - 1)));
  }
  for (int r = 2; r < 8; ++r) CHECK(rep.shells[r].min > rep.shells[r - 1].min);
  // Shell 1 is exactly the generators: gap 2 ln 4.
  CHECK(rep.shells[0].min == doctest::Approx(2 * std::log(4.0)));
  CHECK(rep.shells[0].max == doctest::Approx(2 * std::log(4.0)));
}

TEST_CASE("divergence: trivial and cusped") {
  const auto t = certify_divergence(make_trivial().group, 1, 5);
  CHECK(t.verdict == DivergenceVerdict::NotDivergent);
  for (const auto& s : t.shells) CHECK(s.max == 0.0);

  const auto c = make_cusped_free_group();
  const auto rep = certify_divergence(c.group, 1, 8);
  CHECK(rep.verdict == DivergenceVerdict::DivergentConsistent);
  // The peripheral direction a^r is the slowest: 2 ln sigma_1([[1,2r],[0,1]]).
  for (const auto& s : rep.shells) {
    const double r = s.radius;
    const double s1 = r + std::sqrt(r * r + 1);
    CHECK(s.min <= 2 * std::log(s1) + 1e-9);
  }
  CHECK_THROWS_AS(certify_divergence(c.group, 2, 3), Error);
}

TEST_CASE("divergence: tied shell minima do not count as a drop") {
  // The induced item reaches the same minimum on consecutive shells along
  // different words. Recompute the minima from explicit products and apply
  // the rule with ties allowed.
  const auto item = make_induced_mixed();
  const int k = item.k, r_max = 6;
  std::vector<double> minima;
  for (int r = 1; r <= r_max; ++r) {
    double lo = std::numeric_limits<double>::infinity();
    for (const Word& w : enumerate_sphere(item.group, r)) {
      Matrix m = Matrix::Identity(item.group.dim(), item.group.dim());
      for (Letter x : w) m = (m * item.group.image(x)).eval();
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
      lo = std::min(lo, std::log(sv(k - 1) / sv(k)));
    }
    minima.push_back(lo);
  }
  int from = r_max;
  while (from > 1 && minima[from - 2] <= minima[from - 1] + 1e-9) --from;
  const auto rep = certify_divergence(item.group, k, r_max);
  for (int r = 1; r <= r_max; ++r) CHECK(std::abs(rep.shells[r - 1].min - minima[r - 1]) < 1e-9);
  CHECK(rep.nondecreasing_from == from);
  const bool expect = from <= (r_max + 1) / 2 && minima.back() > rep.threshold;
  CHECK((rep.verdict == DivergenceVerdict::DivergentConsistent) == expect);
}

TEST_CASE("divergence: serial and parallel shells agree") {
  const auto s = make_direct_sum(make_cusped_free_group(), make_schottky());
  const auto a = certify_divergence(s.group, 2, 5, std::log(10.0), Exec::Serial);
  const auto b = certify_divergence(s.group, 2, 5, std::log(10.0), Exec::Parallel);
  for (std::size_t i = 0; i < a.shells.size(); ++i) {
    CHECK(a.shells[i].min == b.shells[i].min);
    CHECK(a.shells[i].median == b.shells[i].median);
    CHECK(a.shells[i].max == b.shells[i].max);
  }
}

TEST_CASE("weak domination fits recover synthetic rates") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  for (double c0 : {0.3, 0.7, 1.5}) {
    std::vector<double> x, y;
    for (int i = 1; i <= 400; ++i) {
      x.push_back(0.05 * i);
      y.push_back(c0 * x.back() + noise(rng));
    }
    const auto fit = fit_domination_samples(x, y);
    CHECK(std::abs(fit.c - c0) <= 0.05);
    CHECK(fit.linear);
    // The reported (C, c) reproduce the violation count.
    int v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) v += y[i] < (1 - fit.slack) * fit.c * x[i] - fit.log_C;
    CHECK(v == fit.violations);
  }
}

TEST_CASE("weak domination: parabolic, hyperbolic, trivial") {
  const auto f = DepthFunction::exponential();
  const auto p = cyclic(from_rows({{1, 1}, {0, 1}}));
  const auto fp = fit_weak_domination(p, p.peripherals()[0], 1, f, 1024);
  CHECK(fp.c == doctest::Approx(std::log(2.0)).epsilon(0.15 / std::log(2.0)));
  CHECK(fp.violations == 0);
  CHECK(fp.linear);
  // Closed form: y = 2 asinh(n/2).
  for (int n : {1, 7, 100, 1024}) CHECK(fp.y[n - 1] == doctest::Approx(2 * std::asinh(n / 2.0)));

  const auto h = cyclic(from_rows({{4, 0}, {0, 0.25}}));
  const auto fh = fit_weak_domination(h, h.peripherals()[0], 1, f, 1024);
  CHECK_FALSE(fh.linear);
  CHECK(fh.y[99] == doctest::Approx(200 * std::log(4.0)));

  const auto t = cyclic(Matrix::Identity(2, 2));
  const auto ft = fit_weak_domination(t, t.peripherals()[0], 1, f, 256);
  CHECK(std::abs(ft.c) < 1e-12);
  CHECK(ft.violations == ft.samples);
}

TEST_CASE("flow probe") {
  const auto s = make_schottky();
  const auto probe = probe_flow_domination(s.group, power(Word{1, 2}, 20), 1);
  REQUIRE(probe.gaps.size() == 40);
  CHECK(probe.slope > 1.0);
  for (std::size_t i = 4; i < probe.gaps.size(); ++i) CHECK(probe.gaps[i] > probe.gaps[i - 4]);

  const auto t = probe_flow_domination(make_trivial().group, Word{1, 2, 1, 2}, 1);
  for (double v : t.gaps) CHECK(v == 0.0);

  const auto p = cyclic(from_rows({{1, 1}, {0, 1}}));
  const auto pp = probe_flow_domination(p, power(Word{1}, 300), 1);
  for (int n : {1, 10, 300}) CHECK(pp.gaps[n - 1] == doctest::Approx(2 * std::asinh(n / 2.0)));
}

TEST_CASE("limit set samples") {
  const auto s = make_schottky();
  SamplerSpec spec;
  spec.rays = 0;
  spec.words = {{"a30", power(Word{1}, 30)}, {"a60", power(Word{1}, 60)}};
  const auto set = sample_limit_set(s.group, 1, spec);
  REQUIRE(set.samples.size() == 2);
  CHECK(flag_distance(set.samples[0].flag, set.samples[1].flag) < 1e-6);
  CHECK(angle_distance(set.samples[0].flag.V, Subspace::coordinate(2, {0})) < 1e-6);

  SamplerSpec rays;
  rays.rays = 5;
  CHECK(sample_limit_set(make_trivial().group, 1, rays).samples.empty());
  CHECK(sample_limit_set(make_trivial().group, 1, rays).skipped == 15);

  // Parabolic: both directions converge to the fixed line span(e1).
  const auto c = make_cusped_free_group();
  SamplerSpec per;
  per.rays = 0;
  const auto ps = sample_limit_set(c.group, 1, per);
  const Subspace e1 = Subspace::coordinate(2, {0});
  int seen = 0;
  for (const auto& x : ps.samples) {
    if (x.label != "a@e") continue;
    ++seen;
    CHECK(angle_distance(x.flag.V, e1) < 1e-4);
  }
  CHECK(seen == 8);

  // Random rays never end in a peripheral fourth power.
  SamplerSpec many;
  many.rays = 40;
  many.peripheral_n.clear();
  for (const auto& x : sample_limit_set(c.group, 1, many).samples) {
    const auto& w = x.word.letters();
    if (w.size() >= 4) CHECK_FALSE((w[w.size() - 1] == w[w.size() - 2] && w[w.size() - 2] == w[w.size() - 3] &&
                                    w[w.size() - 3] == w[w.size() - 4]));
  }
}

TEST_CASE("conjugators in one coset share a label") {
  const auto c = make_cusped_free_group();
  SamplerSpec spec;
  spec.rays = 0;
  spec.conjugators = {Word{}, Word{1}, Word{1, 1}, Word{2}};
  const auto set = sample_limit_set(c.group, 1, spec);
  std::set<std::string> labels;
  for (const auto& s : set.samples) labels.insert(s.label);
  CHECK(labels.count("a@e") == 1);
  CHECK(labels.count("a@b") == 1);
  CHECK(labels.count("a@a") == 0);
}

TEST_CASE("fibers: Schottky singletons, direct-sum pairs") {
  const auto s = make_schottky();
  SamplerSpec spec;
  spec.rays = 0;
  for (Letter x : {1, -1, 2, -2})
    for (int n : {20, 30, 40}) spec.words.emplace_back(to_string(Word{x}), power(Word{x}, n));
  const auto fibers = analyze_fibers(sample_limit_set(s.group, 1, spec));
  REQUIRE(fibers.size() == 4);
  for (const auto& f : fibers) CHECK(f.cardinality == 1);
  CHECK(audit_transversality(fibers).min_margin > 0.1);

  const auto ds = make_direct_sum(make_cusped_free_group(), make_schottky());
  SamplerSpec per;
  per.rays = 0;
  const auto df = analyze_fibers(sample_limit_set(ds.group, 2, per));
  REQUIRE(df.size() == 3);
  for (const auto& f : df) {
    CHECK(f.parabolic);
    CHECK(f.cardinality == 2);
    // The two ends share the parabolic line: not transverse to each other.
    int plus = -1, minus = -1;
    for (std::size_t i = 0; i < f.flags.size(); ++i) (f.cluster[i] == 0 ? plus : minus) = static_cast<int>(i);
    CHECK(flags_transverse(f.flags[plus], f.flags[minus]).margin < 1e-6);
  }
  CHECK(audit_transversality(df).min_margin > 0.05);

  // Single sample: trivially one point, flagged.
  SamplerSpec one;
  one.rays = 0;
  one.words = {{"x", Word{1, 2, 1}}};
  const auto lone = analyze_fibers(sample_limit_set(s.group, 1, one));
  CHECK(lone[0].cardinality == 1);
  CHECK(lone[0].low_confidence);
  CHECK_THROWS_AS(audit_transversality(lone), Error);
  CHECK_THROWS_AS(audit_transversality({lone[0], lone[0]}), Error);
}

TEST_CASE("fiber analysis is invariant under input permutation") {
  const auto ds = make_direct_sum(make_cusped_free_group(), make_schottky());
  SamplerSpec spec;
  spec.rays = 6;
  auto set = sample_limit_set(ds.group, 2, spec);
  const auto a = analyze_fibers(set);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(set.samples.begin(), set.samples.end(), rng);
    const auto b = analyze_fibers(set);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].label == b[i].label);
      CHECK(a[i].cardinality == b[i].cardinality);
      CHECK(a[i].cluster == b[i].cluster);
    }
  }
}

TEST_CASE("dynamics preservation") {
  std::vector<BlockProduct> seq;
  for (int n = 1; n <= 30; ++n) {
    const double t = std::ldexp(1.0, n);
    seq.push_back(split_blocks(ScaledMatrix(from_rows({{t, 0}, {0, 1 / t}}))));
  }
  const Subspace v = Subspace::span({vec({1, 1})});
  const auto rep = test_dynamics_preserving(seq, {v}, 1);
  CHECK(rep.pass);
  const auto& d = rep.distances[0];
  for (int n = 1; n <= 30; ++n) CHECK(d[n - 1] == doctest::Approx(std::atan(std::pow(4.0, -n))).epsilon(1e-9));

  CHECK_THROWS_AS(test_dynamics_preserving(seq, {Subspace::coordinate(2, {1})}, 1), Error);

  std::vector<BlockProduct> par;
  for (int n = 100; n <= 4000; n += 100) par.push_back(split_blocks(ScaledMatrix(from_rows({{1, double(n)}, {0, 1}}))));
  const auto pr = test_dynamics_preserving(par, {Subspace::coordinate(2, {1})}, 1, Subspace::coordinate(2, {0}));
  CHECK(pr.pass);
  CHECK(pr.distances[0].back() == doctest::Approx(std::atan(1.0 / 4000)).epsilon(1e-6));
  CHECK(test_dynamics_preserving(par, {Subspace::coordinate(2, {1})}, 1).pass);

  // Random transverse lines under a divergent diagonal sequence.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<Subspace> lines;
  while (lines.size() < 20) {
    const Subspace l = Subspace::span({vec({nd(rng), nd(rng)})});
    if (transversality_margin(l, Subspace::coordinate(2, {1})) > 0.05) lines.push_back(l);
  }
  CHECK(test_dynamics_preserving(seq, lines, 1, Subspace::coordinate(2, {0})).pass);
}

TEST_CASE("type-preserving perturbations") {
  const auto ds = make_direct_sum(make_cusped_free_group(), make_schottky());
  const auto same = perturb_type_preserving(ds.group, 0.0, 1);
  for (int i = 1; i <= 2; ++i) CHECK(same.image(i) == ds.group.image(i));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = perturb_type_preserving(ds.group, 0.1, seed);
    for (const auto& per : ds.group.peripherals()) {
      const auto& w = per.generator();
      const Complex t0 = evaluate(ds.group, w).value().trace();
      const Complex t1 = evaluate(p, w).value().trace();
      CHECK(std::abs(t0 - t1) < 1e-12);
    }
    CHECK((p.image(1) - ds.group.image(1)).norm() > 0.0);
  }

  // Free generator with no peripheral: additive, bounded, renormalized.
  const auto s = make_schottky();
  const auto q = perturb_type_preserving(s.group, 1e-3, 4);
  for (int i = 1; i <= 2; ++i) {
    CHECK(std::abs(q.image(i).determinant() - 1.0) < 1e-12);
    CHECK(operator_norm(q.image(i) - s.group.image(i)) < 2e-2);
  }
  // Letter peripherals get independent conjugators.
  const auto c = make_cusped_free_group().group.with_peripherals({PeripheralSubgroup::cyclic("a", Word{1})});
  const auto pc = perturb_type_preserving(c, 0.05, 9);
  CHECK(std::abs(pc.image(1).trace() - 2.0) < 1e-12);

  const MarkedGroup fp({from_rows({{0, -1}, {1, 0}})}, Field::Real, PresentationKind::FreeProduct, {}, {4});
  CHECK_THROWS_AS(perturb_type_preserving(fp, 0.1, 1), Error);
}

TEST_CASE("decision table") {
  using V = DivergenceVerdict;
  CHECK(decide_tag(V::NotDivergent, {2, 2}, 0.5, 1e-6) == Tag::NotDivergent);
  CHECK(decide_tag(V::DivergentConsistent, {}, 0.5, 1e-6) == Tag::AnosovConsistent);
  CHECK(decide_tag(V::DivergentConsistent, {1, 1}, 0.5, 1e-6) == Tag::AnosovConsistent);
  CHECK(decide_tag(V::DivergentConsistent, {1, 2}, 0.5, 1e-6) == Tag::NonAnosovConsistent);
  CHECK(decide_tag(V::DivergentConsistent, {1, 2}, 1e-7, 1e-6) == Tag::Inconclusive);
  CHECK(decide_tag(V::DivergentConsistent, {1}, std::nullopt, 1e-6) == Tag::Inconclusive);
  for (Tag t : {Tag::NotDivergent, Tag::AnosovConsistent, Tag::NonAnosovConsistent, Tag::Inconclusive})
    CHECK(parse_tag(to_string(t)) == t);
}

TEST_CASE("diagnose gallery items") {
  DiagnoseConfig cfg;
  cfg.weakdom_n_max = 128;
  const auto s = make_schottky();
  CHECK(diagnose(s.group, s.k, cfg).tag == Tag::AnosovConsistent);
  const auto t = make_trivial();
  CHECK(diagnose(t.group, t.k, cfg).tag == Tag::NotDivergent);
  const auto ds = make_direct_sum(make_cusped_free_group(), make_schottky());
  const auto d = diagnose(ds.group, ds.k, cfg);
  CHECK(d.tag == Tag::NonAnosovConsistent);
  CHECK(d.weakdom.size() == 3);
  // Replaying the stored sub-reports reproduces the tag.
  CHECK(decide_tag(d.divergence.verdict, d.parabolic_cardinalities(),
                   d.audit ? std::optional<double>(d.audit->min_margin) : std::nullopt, cfg.margin_tol) == d.tag);
  CHECK_THROWS_AS(diagnose(ds.group, 3, cfg), Error);
}

TEST_CASE("weak domination of a non-letter parabolic peripheral") {
  // (a^-1 b)^n = (-1)^n (I + nN): the same logarithmic growth as a^n, with a
  // larger additive offset.
  const auto item = make_cusped_free_group();
  const auto& ab = item.group.peripherals()[2];
  REQUIRE(to_string(ab.generator()) == "Ab");
  const auto fit = fit_weak_domination(item.group, ab, 1, DepthFunction::exponential(2.0), 1024);
  CHECK(fit.c == doctest::Approx(std::log(2.0)).epsilon(0.2));
  CHECK(fit.violations == 0);
  CHECK(fit.linear);
}

TEST_CASE("rays branch away from each other and from sampled parabolic points") {
  const auto item = make_cusped_free_group();
  SamplerSpec spec;
  spec.rays = 12;
  spec.peripheral_n = {1LL << 20};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    spec.seed = seed;
    const auto set = sample_limit_set(item.group, item.k, spec);
    std::vector<Word> rays;
    for (const auto& s : set.samples)
      if (s.source == "ray" && s.n == spec.ray_length) rays.push_back(s.word);
    REQUIRE(rays.size() == 12);
    auto prefix = [&](const Word& w) {
      return std::vector<Letter>(w.begin(), w.begin() + std::min<std::ptrdiff_t>(spec.ray_separation, w.size()));
    };
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(prefix(rays[i]) != prefix(rays[j]));
    for (const auto& p : item.group.peripherals())
      for (int e : {-1, 1}) {
        const Word w = item.group.normal_form(power(p.generator(), e * spec.ray_length));
        for (const auto& r : rays) CHECK(prefix(r) != prefix(w));
      }
  }
  // Too many rays for the separation is reported, not looped on.
  spec.rays = 1000;
  CHECK_THROWS_AS(sample_limit_set(item.group, item.k, spec), Error);
  spec.ray_separation = 0;
  spec.rays = 40;
  CHECK(sample_limit_set(item.group, item.k, spec).samples.size() > 0);
}
