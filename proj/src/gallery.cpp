#include "relanosov/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relanosov/dynamics.hpp"
#include "relanosov/error.hpp"

namespace relanosov {

namespace {

Matrix rotation(double t) { return from_rows({{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}); }

// Attracting fixed point p and repelling q on the projective line, with
// eigenvalues lambda and 1/lambda.
Matrix hyperbolic(double p, double q, double lambda) {
  const Matrix P = from_rows({{p, q}, {1.0, 1.0}});
  const Matrix D = from_rows({{lambda, 0.0}, {0.0, 1.0 / lambda}});
  return P * D * P.inverse();
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

double max_entry_distance(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix evaluate_plain(const MarkedGroup& g, const Word& w) {
  Matrix m = Matrix::Identity(g.dim(), g.dim());
  for (Letter x : w) m = m * g.image(x);
  return m;
}

}  // namespace

GalleryItem make_cusped_free_group() {
  MarkedGroup g({from_rows({{1, 2}, {0, 1}}), from_rows({{1, 0}, {2, 1}})}, Field::Real, PresentationKind::Free,
                {PeripheralSubgroup::cyclic("a", Word{1}), PeripheralSubgroup::cyclic("b", Word{2}),
                 PeripheralSubgroup::cyclic("Ab", Word{-1, 2})});
  return {"cusped", std::move(g), 1, Tag::AnosovConsistent,
          "free group on two parabolics generating a thrice-punctured sphere group; peripherals "
          "chosen because their traces are +-2",
          {2}, 0.0};
}

GalleryItem make_schottky(double lambda, double theta) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidInput, "lambda must be positive");
  const Matrix g1 = from_rows({{lambda, 0.0}, {0.0, 1.0 / lambda}});
  const Matrix r = rotation(theta);
  MarkedGroup g({g1, r * g1 * r.transpose()}, Field::Real);

  std::vector<Matrix> values;
  for (int len = 0; len <= 6; ++len)
    for (const auto& w : enumerate_sphere(g, len)) values.push_back(evaluate_plain(g, w));
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      closest = std::min(closest, max_entry_distance(values[i], values[j]));
  if (!(closest > 1e-6)) {
    throw Error(ErrorCode::FreenessCheckFailed,
                "two reduced words of length <= 6 have images within " + std::to_string(closest));
  }
  return {"schottky", std::move(g), 1, Tag::AnosovConsistent,
          "convex cocompact (all funnels) Schottky pair; freeness checked on 1457 words", {2}, closest};
}

GalleryItem make_trivial(int rank, int d) {
  if (rank < 1 || d < 2) throw Error(ErrorCode::InvalidInput, "trivial item needs rank >= 1 and d >= 2");
  std::vector<Matrix> images(static_cast<std::size_t>(rank), Matrix::Identity(d, d));
  return {"trivial", MarkedGroup(std::move(images), Field::Real), 1, Tag::NotDivergent,
          "every generator acts trivially", {d}, 0.0};
}

GalleryItem make_direct_sum(const GalleryItem& x, const GalleryItem& y) {
  const auto& gx = x.group;
  const auto& gy = y.group;
  if (gx.rank() != gy.rank() || gx.kind() != gy.kind() || gx.orders() != gy.orders()) {
    throw Error(ErrorCode::RankMismatch, "direct sum needs the same marked group");
  }
  if (gx.field() != gy.field()) throw Error(ErrorCode::RankMismatch, "direct sum needs the same field");
  std::vector<Matrix> images;
  for (int i = 1; i <= gx.rank(); ++i) images.push_back(block_diag(gx.image(i), gy.image(i)));
  std::vector<PeripheralSubgroup> periph = gx.peripherals();
  for (const auto& p : gy.peripherals()) {
    const bool dup = std::any_of(periph.begin(), periph.end(),
                                 [&](const PeripheralSubgroup& q) { return q.generators() == p.generators(); });
    if (!dup) periph.push_back(p);
  }
  GalleryItem out{x.name + "+" + y.name,
                  MarkedGroup(std::move(images), gx.field(), gx.kind(), std::move(periph), gx.orders()),
                  x.k + y.k,
                  std::nullopt,
                  "block-diagonal sum " + x.name + " + " + y.name,
                  {},
                  0.0};
  out.block_sizes = x.block_sizes;
  out.block_sizes.insert(out.block_sizes.end(), y.block_sizes.begin(), y.block_sizes.end());
  // A cusped factor next to a factor without cusps: each parabolic point
  // has a two-point fiber, coming from the two ends of the hyperbolic block.
  const bool cusped_x = !gx.peripherals().empty(), cusped_y = !gy.peripherals().empty();
  if (cusped_x != cusped_y && x.expected == Tag::AnosovConsistent && y.expected == Tag::AnosovConsistent) {
    out.expected = Tag::NonAnosovConsistent;
  }
  return out;
}

GalleryItem make_induced(const MarkedGroup& sub_rep, const CosetTable& t, std::vector<PeripheralSubgroup> peripherals,
                         std::string name) {
  if (!t.has_schreier_transversal()) throw Error(ErrorCode::InconsistentTable, "representatives are not Schreier");
  if (sub_rep.rank() != static_cast<int>(t.schreier_basis().size())) {
    throw Error(ErrorCode::InconsistentTable, "sub-representation rank differs from the Schreier basis size");
  }
  const int n = t.index();
  const int d0 = sub_rep.dim();
  std::vector<Matrix> images;
  for (int x = 1; x <= t.rank(); ++x) {
    Matrix m = Matrix::Zero(n * d0, n * d0);
    for (int i = 0; i < n; ++i) {
      const CosetRewrite rw = coset_normal_form(t, Word{x}, i);
      m.block(rw.coset * d0, i * d0, d0, d0) = evaluate_plain(sub_rep, rw.subgroup);
    }
    images.push_back(std::move(m));
  }
  GalleryItem out{std::move(name),
                  MarkedGroup(std::move(images), sub_rep.field(), PresentationKind::Free, std::move(peripherals)),
                  n,
                  std::nullopt,
                  "induced from an index-" + std::to_string(n) + " subgroup",
                  std::vector<int>(static_cast<std::size_t>(n), d0),
                  0.0};
  return out;
}

GalleryItem make_induced_mixed() {
  const CosetTable t = index_two_swap_table(2);
  std::vector<Matrix> basis_images;
  for (const Word& w : t.schreier_basis()) {
    if (w == Word{-1, 2}) {
      basis_images.push_back(from_rows({{1, 10}, {0, 1}}));
    } else if (w == Word{1, 1}) {
      basis_images.push_back(hyperbolic(1.0, -1.0, 20.0));
    } else if (w == Word{2, 1}) {
      basis_images.push_back(hyperbolic(3.0, -3.0, 20.0));
    } else {
      throw Error(ErrorCode::InconsistentTable, "unexpected Schreier basis element " + to_string(w));
    }
  }
  MarkedGroup rho1(std::move(basis_images), Field::Real);
  auto item = make_induced(rho1, t, {PeripheralSubgroup::cyclic("Ab", Word{-1, 2})}, "induced");
  item.provenance =
      "index-2 cover of the rank-2 free group; ping-pong sub-representation with one parabolic basis element";
  return item;
}

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Parabolic: return "parabolic";
    case BlockKind::Hyperbolic: return "hyperbolic";
    case BlockKind::EllipticOrOther: return "elliptic/other";
  }
  return "elliptic/other";
}

std::vector<PeripheralStructure> peripheral_structure_report(const GalleryItem& item) {
  const auto& g = item.group;
  std::vector<int> starts{0};
  for (int s : item.block_sizes) starts.push_back(starts.back() + s);
  if (item.block_sizes.empty() || starts.back() != g.dim()) {
    throw Error(ErrorCode::NotBlockStructured, "item has no block layout");
  }
  std::vector<std::pair<std::string, Word>> elements;
  for (const auto& p : g.peripherals())
    for (const Word& w : p.generators()) elements.emplace_back(p.label(), w);
  if (elements.empty())
    for (int i = 1; i <= g.rank(); ++i) elements.emplace_back(to_string(Word{i}), Word{i});

  std::vector<PeripheralStructure> out;
  for (const auto& [label, w] : elements) {
    const Matrix m = evaluate_plain(g, w);
    const double scale = m.cwiseAbs().maxCoeff();
    PeripheralStructure ps{label, w, {}};
    for (std::size_t b = 0; b < item.block_sizes.size(); ++b) {
      const int s0 = starts[b], n = item.block_sizes[b];
      for (int i = 0; i < g.dim(); ++i)
        for (int j = s0; j < s0 + n; ++j) {
          if ((i < s0 || i >= s0 + n) && std::abs(m(i, j)) > 1e-12 * scale) {
            throw Error(ErrorCode::NotBlockStructured, label + " is not block diagonal");
          }
        }
      Matrix blk = m.block(s0, s0, n, n);
      const double det = std::abs(blk.determinant());
      if (det > 0.0) blk /= std::pow(det, 1.0 / n);
      BlockClass bc{static_cast<int>(b), BlockKind::EllipticOrOther, blk.trace().real()};
      const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Matrix>(blk).eigenvalues();
      const double hi = ev.cwiseAbs().maxCoeff(), lo = ev.cwiseAbs().minCoeff();
      const Complex tr = blk.trace();
      const bool trace_pm2 = n == 2 && std::abs(tr.imag()) <= 1e-6 && std::abs(std::abs(tr.real()) - 2.0) <= 1e-6;
      const double sign = tr.real() >= 0 ? 1.0 : -1.0;
      if (trace_pm2 && (blk - sign * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-6) {
        bc.kind = BlockKind::Parabolic;
      } else if (lo > 0.0 && hi / lo > 1.0 + 1e-6) {
        bc.kind = BlockKind::Hyperbolic;
      }
      ps.blocks.push_back(bc);
    }
    out.push_back(std::move(ps));
  }
  return out;
}

std::vector<std::string> gallery_names() { return {"cusped", "schottky", "direct-sum", "trivial", "induced"}; }

GalleryItem make_gallery_item(const std::string& name) {
  if (name == "cusped") return make_cusped_free_group();
  if (name == "schottky") return make_schottky();
  if (name == "trivial") return make_trivial();
  if (name == "induced") return make_induced_mixed();
  if (name == "direct-sum") {
    auto item = make_direct_sum(make_cusped_free_group(), make_schottky());
    item.name = "direct-sum";
    return item;
  }
  throw Error(ErrorCode::ConfigError, "unknown gallery item '" + name + "'");
}

}  // namespace relanosov
