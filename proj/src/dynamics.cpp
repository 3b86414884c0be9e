#include "relanosov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relanosov/error.hpp"

namespace relanosov {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kRenormalizeEvery = 8;

double log_abs_det_of(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return std::log(std::abs(m.determinant()));
}

// Exact inverse for 2x2 (adjugate), LU otherwise.
Matrix invert(const Matrix& m) {
  if (m.rows() == 2) {
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Matrix out(2, 2);
    out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return out / det;
  }
  return m.inverse();
}

Matrix extract(const Matrix& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

std::vector<std::vector<int>> nonzero_components(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

ScaledMatrix square_and_multiply(ScaledMatrix base, unsigned long long n) {
  ScaledMatrix result = ScaledMatrix::identity(base.dim());
  while (n > 0) {
    if (n & 1ULL) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

bool triangular(const Matrix& m) {
  return m.isUpperTriangular(0.0) || m.isLowerTriangular(0.0);
}

// Givens rotation [c s; -conj(s) c] taking (f, g) to (r, 0).
void rotation(Complex f, Complex g, double& c, Complex& s) {
  if (g == Complex(0.0, 0.0)) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (f == Complex(0.0, 0.0)) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
    return;
  }
  const double nf = std::abs(f), norm = std::hypot(nf, std::abs(g));
  c = nf / norm;
  s = (f / nf) * std::conj(g) / norm;
}

// Applies the rotation to the pair (x, y) in place.
template <class X, class Y>
void rotate(X&& x, Y&& y, double c, Complex s) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex t = c * x(i) + s * y(i);
    y(i) = c * y(i) - std::conj(s) * x(i);
    x(i) = t;
  }
}

// Swaps diagonal entries k and k+1 of the Schur form q t q^*.
void swap_schur(Matrix& t, Matrix& q, Eigen::Index k) {
  const Eigen::Index n = t.rows();
  const Complex t11 = t(k, k), t22 = t(k + 1, k + 1);
  double c = 1.0;
  Complex s = 0.0;
  rotation(t(k, k + 1), t22 - t11, c, s);
  if (k + 2 < n) rotate(t.row(k).tail(n - k - 2), t.row(k + 1).tail(n - k - 2), c, s);
  if (k > 0) rotate(t.col(k).head(k), t.col(k + 1).head(k), c, std::conj(s));
  rotate(q.col(k), q.col(k + 1), c, std::conj(s));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  t(k + 1, k) = 0.0;
}

constexpr double kClusterGap = 1e-3;     // log-modulus gap that separates clusters
constexpr double kCoincident = 1e-6;     // relative spread of equal eigenvalues
constexpr double kMaxSplitCondition = 1e8;

// Solves a x - x b = -c for upper triangular a, b with disjoint spectra.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  Matrix x(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    Vector rhs = -c.col(j);
    for (Eigen::Index l = 0; l < j; ++l) rhs += x.col(l) * b(l, j);
    Matrix shifted = a;
    shifted.diagonal().array() -= b(j, j);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

struct PoweredBlock {
  Matrix basis, basis_inverse;  // empty when not split
  std::vector<int> sizes;
  std::vector<ScaledMatrix> parts;
};

PoweredBlock power_of(const ScaledMatrix& base, unsigned long long n) {
  PoweredBlock out;
  const int d = base.dim();
  if (d < 2 || triangular(base.entries())) {
    out.sizes = {d};
    out.parts = {square_and_multiply(base, n)};
    return out;
  }
  // Powers of the Schur factor T are cancellation-free (squaring a full
  // unipotent block drowns the identity part in n N once n^2 > 1/eps).
  const Eigen::ComplexSchur<Matrix> schur(base.entries());
  Matrix t = schur.matrixT();
  Matrix q = schur.matrixU();
  for (int pass = 0; pass < d; ++pass)
    for (Eigen::Index k = 0; k + 1 < d; ++k)
      if (std::abs(t(k, k)) < std::abs(t(k + 1, k + 1))) swap_schur(t, q, k);

  for (Eigen::Index i = 0; i < d; ++i) {
    Complex sum = 0.0;
    std::vector<Eigen::Index> group;
    for (Eigen::Index j = 0; j < d; ++j)
      if (std::abs(t(j, j) - t(i, i)) <= kCoincident * std::abs(t(i, i))) group.push_back(j);
    if (group.size() < 2) continue;
    for (auto j : group) sum += t(j, j);
    for (auto j : group) t(j, j) = sum / static_cast<double>(group.size());
  }

  std::vector<int> starts{0};
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    const double a = std::abs(t(k, k)), b = std::abs(t(k + 1, k + 1));
    if (b > 0.0 && std::log(a / b) > kClusterGap) starts.push_back(static_cast<int>(k + 1));
  }
  starts.push_back(d);

  auto part_of = [&](Eigen::Index at, Eigen::Index size) {
    const Matrix block = t.block(at, at, size, size);
    const double det = log_abs_det_of(block) + static_cast<double>(size) * base.log_scale();
    return square_and_multiply(base.with_entries(block, det), n);
  };

  if (starts.size() > 2) {
    const Matrix sorted = t;
    Matrix y = Matrix::Identity(d, d);
    for (std::size_t c = 0; c + 2 < starts.size(); ++c) {
      const Eigen::Index at = starts[c], p = starts[c + 1] - starts[c], rest = d - starts[c + 1];
      const Matrix x = solve_sylvester(t.block(at, at, p, p), t.block(at + p, at + p, rest, rest),
                                       t.block(at, at + p, p, rest));
      Matrix step = Matrix::Identity(d, d);
      step.block(at, at + p, p, rest) = x;
      y = y * step;
      t.block(at, at + p, p, rest).setZero();
    }
    const Matrix y_inv = y.triangularView<Eigen::UnitUpper>().solve(Matrix::Identity(d, d));
    if (all_finite(y_inv) && y.norm() * y_inv.norm() <= kMaxSplitCondition) {
      out.basis = q * y;
      out.basis_inverse = y_inv * q.adjoint();
      for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        out.sizes.push_back(starts[c + 1] - starts[c]);
        out.parts.push_back(part_of(starts[c], starts[c + 1] - starts[c]));
      }
      return out;
    }
    t = sorted;  // too ill-conditioned to split
  }
  const ScaledMatrix tn = square_and_multiply(base.with_entries(t, base.log_abs_det()), n);
  Matrix full = q * tn.entries() * q.adjoint();
  if (is_real(base.entries())) full = full.real().cast<Complex>();
  out.sizes = {d};
  out.parts = {tn.with_entries(std::move(full), tn.log_abs_det())};
  return out;
}

}  // namespace

ScaledMatrix::ScaledMatrix(const Matrix& m) : entries_(m), log_abs_det_(log_abs_det_of(m)) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "square matrix required");
  renormalize();
}

ScaledMatrix::ScaledMatrix(Matrix entries, double log_scale, double log_abs_det)
    : entries_(std::move(entries)), log_extra_(log_scale), log_abs_det_(log_abs_det) {
  renormalize();
}

ScaledMatrix ScaledMatrix::identity(int d) {
  return ScaledMatrix(Matrix::Identity(d, d), 0.0, 0.0);
}

double ScaledMatrix::log_scale() const noexcept {
  return static_cast<double>(exp2_) * kLn2 + log_extra_;
}

Matrix ScaledMatrix::value() const { return entries_ * std::exp(log_scale()); }

void ScaledMatrix::renormalize() {
  if (entries_.size() == 0) return;
  const double mx = entries_.cwiseAbs().maxCoeff();
  if (mx == 0.0 || !std::isfinite(mx)) return;
  int e = 0;
  std::frexp(mx, &e);
  --e;  // mx = f * 2^e with f in [1, 2)
  if (e == 0) return;
  entries_ *= std::ldexp(1.0, -e);
  exp2_ += e;
}

void ScaledMatrix::right_multiply(const Matrix& m, double log_abs_det, bool renormalize_now) {
  if (dim() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "product of different sizes");
  entries_ = entries_ * m;
  log_abs_det_ += log_abs_det;
  if (renormalize_now) renormalize();
}

ScaledMatrix ScaledMatrix::with_entries(Matrix entries, double log_abs_det) const {
  ScaledMatrix out;
  out.entries_ = std::move(entries);
  out.exp2_ = exp2_;
  out.log_extra_ = log_extra_;
  out.log_abs_det_ = log_abs_det;
  out.renormalize();
  return out;
}

ScaledMatrix& ScaledMatrix::operator*=(const ScaledMatrix& rhs) {
  if (dim() != rhs.dim()) throw Error(ErrorCode::DimensionMismatch, "product of different sizes");
  entries_ = entries_ * rhs.entries_;
  exp2_ += rhs.exp2_;
  log_extra_ += rhs.log_extra_;
  log_abs_det_ += rhs.log_abs_det_;
  renormalize();
  return *this;
}

ScaledMatrix ScaledMatrix::inverse() const {
  ScaledMatrix out(invert(entries_), -log_extra_, -log_abs_det_);
  out.exp2_ -= exp2_;
  return out;
}

Subspace image_subspace(const BlockProduct& p, const Subspace& v) {
  if (v.ambient() != p.dim) throw Error(ErrorCode::DimensionMismatch, "subspace/product size");
  const Matrix f = p.has_basis() ? Matrix(p.basis_inverse * v.frame()) : v.frame();
  Matrix rows = Matrix::Zero(p.dim, f.cols());
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(p.dim);
  for (std::size_t b = 0; b < p.parts.size(); ++b) {
    const auto& idx = p.blocks[b];
    const Matrix& e = p.parts[b].entries();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      scale(idx[i]) = p.parts[b].log_scale();
      for (std::size_t j = 0; j < idx.size(); ++j)
        rows.row(idx[i]) += e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * f.row(idx[j]);
    }
  }
  Matrix basis = graded_column_basis(rows, scale);
  if (basis.cols() != f.cols()) throw Error(ErrorCode::NumericalFailure, "image lost rank");
  if (p.has_basis()) basis = p.basis * basis;
  return Subspace(basis);
}

ScaledMatrix BlockProduct::assemble() const {
  if (parts.empty()) return ScaledMatrix::identity(dim);
  double top = parts.front().log_scale();
  for (const auto& p : parts) top = std::max(top, p.log_scale());
  Matrix m = Matrix::Zero(dim, dim);
  double det = 0.0;
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const auto& idx = blocks[b];
    const double factor = std::exp(parts[b].log_scale() - top);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        m(idx[i], idx[j]) = parts[b].entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * factor;
    det += parts[b].log_abs_det();
  }
  if (has_basis()) m = basis * m * basis_inverse;
  return ScaledMatrix(std::move(m), top, det);
}

BlockProduct BlockProduct::inverse() const {
  BlockProduct out{dim, blocks, {}, basis, basis_inverse};
  for (const auto& p : parts) out.parts.push_back(p.inverse());
  return out;
}

BlockProduct split_blocks(const ScaledMatrix& m) {
  BlockProduct out;
  out.dim = m.dim();
  out.blocks = nonzero_components(m.entries());
  if (out.blocks.size() == 1) {
    out.parts.push_back(m);
    return out;
  }
  for (const auto& idx : out.blocks) {
    const Matrix sub = extract(m.entries(), idx);
    const double det = log_abs_det_of(sub) + static_cast<double>(idx.size()) * m.log_scale();
    out.parts.push_back(m.with_entries(sub, det));
  }
  return out;
}

BlockProduct evaluate_blocks(const MarkedGroup& g, const Word& w) {
  BlockProduct out;
  out.dim = g.dim();
  out.blocks = g.blocks();
  const bool single = out.blocks.size() == 1;
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto& idx = out.blocks[b];
    const auto n = static_cast<Eigen::Index>(idx.size());
    ScaledMatrix acc = ScaledMatrix::identity(static_cast<int>(n));
    int since = 0;
    for (Letter x : w) {
      const bool renorm = ++since == kRenormalizeEvery;
      if (single) {
        acc.right_multiply(g.image(x), 0.0, renorm);
      } else {
        acc.right_multiply(extract(g.image(x), idx), g.block_log_dets(x)[b], renorm);
      }
      if (renorm) since = 0;
    }
    acc.renormalize();
    out.parts.push_back(std::move(acc));
  }
  return out;
}

void append_letter(BlockProduct& p, const MarkedGroup& g, Letter x, bool renormalize_now) {
  if (p.blocks != g.blocks()) throw Error(ErrorCode::DimensionMismatch, "product not laid out along the group blocks");
  if (p.blocks.size() == 1) {
    p.parts[0].right_multiply(g.image(x), 0.0, renormalize_now);
    return;
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    p.parts[b].right_multiply(extract(g.image(x), p.blocks[b]), g.block_log_dets(x)[b], renormalize_now);
  }
}

ScaledMatrix evaluate(const MarkedGroup& g, const Word& w) { return evaluate_blocks(g, w).assemble(); }

BlockProduct power(const BlockProduct& m, long long n) {
  if (n < 0) return power(m.inverse(), -n);
  const auto un = static_cast<unsigned long long>(n);
  BlockProduct out;
  out.dim = m.dim;
  if (m.has_basis()) {
    // Already spectral: the parts are triangular clusters.
    out.blocks = m.blocks;
    out.basis = m.basis;
    out.basis_inverse = m.basis_inverse;
    for (const auto& p : m.parts) out.parts.push_back(square_and_multiply(p, un));
    return out;
  }
  struct Piece {
    std::vector<int> idx;
    PoweredBlock powered;
  };
  std::vector<Piece> pieces;
  bool split = false;
  for (std::size_t b = 0; b < m.parts.size(); ++b) {
    const BlockProduct sub = split_blocks(m.parts[b]);
    for (std::size_t s = 0; s < sub.parts.size(); ++s) {
      std::vector<int> idx;
      for (int i : sub.blocks[s]) idx.push_back(m.blocks[b][static_cast<std::size_t>(i)]);
      pieces.push_back({std::move(idx), power_of(sub.parts[s], un)});
      split = split || pieces.back().powered.basis.size() != 0;
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.idx < b.idx; });
  if (split) {
    out.basis = Matrix::Identity(m.dim, m.dim);
    out.basis_inverse = Matrix::Identity(m.dim, m.dim);
  }
  for (auto& piece : pieces) {
    const auto& pw = piece.powered;
    if (pw.basis.size() != 0) {
      const auto k = static_cast<Eigen::Index>(piece.idx.size());
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
          out.basis(piece.idx[i], piece.idx[j]) = pw.basis(i, j);
          out.basis_inverse(piece.idx[i], piece.idx[j]) = pw.basis_inverse(i, j);
        }
    }
    std::size_t at = 0;
    for (std::size_t c = 0; c < pw.parts.size(); ++c) {
      const auto size = static_cast<std::size_t>(pw.sizes[c]);
      out.blocks.emplace_back(piece.idx.begin() + static_cast<std::ptrdiff_t>(at),
                              piece.idx.begin() + static_cast<std::ptrdiff_t>(at + size));
      out.parts.push_back(pw.parts[c]);
      at += size;
    }
  }
  return out;
}

BlockProduct power(const MarkedGroup& g, const Word& w, long long n) {
  return power(evaluate_blocks(g, w), n);
}

double SingularData::log_gap(int k) const {
  if (k < 1 || k >= dim()) throw Error(ErrorCode::InvalidInput, "gap index out of range");
  return log_sigma(k - 1) - log_sigma(k);
}

std::vector<double> SingularData::gaps() const {
  std::vector<double> out;
  for (int k = 1; k < dim(); ++k) out.push_back(log_gap(k));
  return out;
}

SingularData singular_data(const ScaledMatrix& m) {
  if (!all_finite(m.entries()) || !std::isfinite(m.log_scale())) {
    throw Error(ErrorCode::NumericalFailure, "non-finite matrix");
  }
  const int d = m.dim();
  Eigen::JacobiSVD<Matrix> svd(m.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  SingularData out;
  out.log_sigma.resize(d);
  for (int i = 0; i < d; ++i) out.log_sigma(i) = std::log(s(i)) + m.log_scale();
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  // When only the smallest singular value is below resolution, recover it
  // from the tracked determinant.
  if (d >= 2 && s(0) > 0.0 && std::isfinite(m.log_abs_det())) {
    const bool last_lost = s(d - 1) < 1e-10 * s(0);
    const bool others_ok = d == 2 || s(d - 2) >= 1e-10 * s(0);
    if (last_lost && others_ok) {
      const double rest = out.log_sigma.head(d - 1).sum();
      out.log_sigma(d - 1) = std::min(m.log_abs_det() - rest, out.log_sigma(d - 2));
    }
  }
  return out;
}

namespace {

// Singular data of basis * diag(parts) * basis^-1. With the columns of the
// basis ordered by block scale, basis = Q R gives X = Q E H with E the row
// scales and H = (E^-1 R E) N basis^-1 bounded (E^-1 R E only shrinks the
// entries above the diagonal). Rows of E H are then taken in groups of
// comparable scale, each projected off the row space of the larger ones.
// Within a group only the leading singular values are accurate, so callers
// use the top half of the spectrum. Rows a factor e^w apart lose eps e^w
// when grouped and about e^-2w when projected separately; w = 12 balances
// the two near 1e-10.
constexpr double kGradeWindow = 12.0;

SingularData graded_singular_data(const BlockProduct& m) {
  const int d = m.dim;
  std::vector<std::size_t> order(m.parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m.parts[a].log_scale() > m.parts[b].log_scale();
  });
  std::vector<int> perm;
  std::vector<double> scale;
  Matrix n = Matrix::Zero(d, d);
  for (std::size_t b : order) {
    const auto at = static_cast<Eigen::Index>(perm.size());
    const auto& idx = m.blocks[b];
    n.block(at, at, static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size())) =
        m.parts[b].entries();
    for (int i : idx) {
      perm.push_back(i);
      scale.push_back(m.parts[b].log_scale());
    }
  }
  Matrix sp(d, d), tp(d, d);
  for (int r = 0; r < d; ++r) {
    sp.col(r) = m.basis.col(perm[r]);
    tp.row(r) = m.basis_inverse.row(perm[r]);
  }
  const Eigen::HouseholderQR<Matrix> qr(sp);
  const Matrix qs = qr.householderQ();
  Matrix g = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) g(i, j) *= std::exp(scale[j] - scale[i]);
  const Matrix h = g * n * tp;

  SingularData out;
  out.log_sigma.resize(d);
  out.left = Matrix::Zero(d, d);
  out.right = Matrix::Zero(d, d);
  Matrix perp = Matrix::Identity(d, d);
  int r0 = 0;
  while (r0 < d) {
    int r1 = r0 + 1;
    while (r1 < d && scale[r0] - scale[r1] <= kGradeWindow) ++r1;
    const int rows = r1 - r0;
    Matrix a(rows, perp.cols());
    for (int r = r0; r < r1; ++r) a.row(r - r0) = std::exp(scale[r] - scale[r0]) * (h.row(r) * perp);
    const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    for (int i = 0; i < rows; ++i) {
      out.log_sigma(r0 + i) = std::log(svd.singularValues()(i)) + scale[r0];
      out.left.col(r0 + i) = qs.middleCols(r0, rows) * svd.matrixU().col(i);
      out.right.col(r0 + i) = perp * svd.matrixV().col(i);
    }
    perp = (perp * svd.matrixV().rightCols(perp.cols() - rows)).eval();
    r0 = r1;
  }
  return out;
}

SingularData spectral_singular_data(const BlockProduct& m) {
  const int d = m.dim;
  const int top = (d + 1) / 2;
  const SingularData fwd = graded_singular_data(m);
  const SingularData inv = graded_singular_data(m.inverse());
  SingularData out = fwd;
  for (int i = top; i < d; ++i) {
    out.log_sigma(i) = std::min(-inv.log_sigma(d - 1 - i), out.log_sigma(i - 1));
    out.left.col(i) = inv.right.col(d - 1 - i);
    out.right.col(i) = inv.left.col(d - 1 - i);
  }
  if (!out.log_sigma.allFinite()) throw Error(ErrorCode::NumericalFailure, "singular values out of range");
  out.left = Eigen::HouseholderQR<Matrix>(out.left).householderQ();
  out.right = Eigen::HouseholderQR<Matrix>(out.right).householderQ();
  return out;
}

}  // namespace

SingularData singular_data(const BlockProduct& m) {
  if (m.has_basis()) return spectral_singular_data(m);
  struct Entry {
    double log_sigma;
    std::size_t block;
    Eigen::Index column;
  };
  std::vector<Entry> entries;
  std::vector<SingularData> parts;
  for (std::size_t b = 0; b < m.parts.size(); ++b) {
    parts.push_back(singular_data(m.parts[b]));
    for (Eigen::Index c = 0; c < parts.back().log_sigma.size(); ++c) {
      entries.push_back({parts.back().log_sigma(c), b, c});
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.log_sigma > b.log_sigma; });
  SingularData out;
  out.log_sigma.resize(m.dim);
  out.left = Matrix::Zero(m.dim, m.dim);
  out.right = Matrix::Zero(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i) {
    const auto& e = entries[static_cast<std::size_t>(i)];
    out.log_sigma(i) = e.log_sigma;
    const auto& idx = m.blocks[e.block];
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.left(idx[r], i) = parts[e.block].left(static_cast<Eigen::Index>(r), e.column);
      out.right(idx[r], i) = parts[e.block].right(static_cast<Eigen::Index>(r), e.column);
    }
  }
  return out;
}

Subspace uk_subspace(const SingularData& s, int k, double tol) {
  if (!(s.log_gap(k) > tol)) {
    throw Error(ErrorCode::NoGap, "no singular value gap at k = " + std::to_string(k));
  }
  return Subspace(s.left.leftCols(k));
}

Subspace uk_subspace(const ScaledMatrix& m, int k, double tol) {
  return uk_subspace(singular_data(m), k, tol);
}

Subspace u_dk_inverse(const ScaledMatrix& m, int k, double tol) {
  const Subspace perp = uk_subspace(m, k, tol).complement();
  return perp.image(invert(m.entries()));
}

Flag limit_flag(const SingularData& s, int k, double tol) {
  const int d = s.dim();
  if (k < 1 || 2 * k > d) throw Error(ErrorCode::InvalidInput, "flag index must satisfy 1 <= k <= d/2");
  Subspace v = uk_subspace(s, k, tol);
  Subspace w = uk_subspace(s, d - k, tol);
  return Flag{std::move(v), std::move(w)};
}

BpsCheck check_bps_bounds(const ScaledMatrix& g, const ScaledMatrix& h, int k, double tol) {
  const ScaledMatrix gh = g * h;
  const SingularData sg = singular_data(g);
  const SingularData sh = singular_data(h);
  const SingularData sgh = singular_data(gh);
  const int d = sg.dim();
  const Subspace ug = uk_subspace(sg, k, tol);
  const Subspace ugh = uk_subspace(sgh, k, tol);
  auto condition = [d](const SingularData& s) { return std::exp(s.log_sigma(0) - s.log_sigma(d - 1)); };

  BpsCheck out;
  out.angle1 = angle_distance(ug, ugh);
  out.lhs1 = std::sin(out.angle1);
  out.rhs1 = condition(sh) * std::exp(-sg.log_gap(k));
  out.part2 = sh.log_gap(k) > tol;
  if (out.part2) {
    const Subspace uh = uk_subspace(sh, k, tol);
    out.angle2 = angle_distance(uh.image(g.entries()), ugh);
    out.lhs2 = std::sin(out.angle2);
    out.rhs2 = condition(sg) * std::exp(-sh.log_gap(k));
  }
  return out;
}

}  // namespace relanosov
