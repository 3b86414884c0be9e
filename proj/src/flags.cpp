#include "relanosov/flags.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "relanosov/error.hpp"
#include "relanosov/kernels.hpp"

namespace relanosov {

Subspace::Subspace(const Matrix& spanning_columns) : frame_(orthonormal_basis(spanning_columns)) {
  if (frame_.cols() != spanning_columns.cols()) {
    throw Error(ErrorCode::InvalidInput, "spanning columns are linearly dependent");
  }
}

Subspace Subspace::span(std::initializer_list<Vector> vectors) {
  if (vectors.size() == 0) throw Error(ErrorCode::InvalidInput, "empty span");
  const auto d = vectors.begin()->size();
  Matrix m(d, static_cast<Eigen::Index>(vectors.size()));
  Eigen::Index j = 0;
  for (const auto& v : vectors) {
    if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "vectors of different length");
    m.col(j++) = v;
  }
  return Subspace(m);
}

Subspace Subspace::coordinate(int d, std::initializer_list<int> indices) {
  Matrix m = Matrix::Zero(d, static_cast<Eigen::Index>(indices.size()));
  Eigen::Index j = 0;
  for (int i : indices) m(i, j++) = 1.0;
  return Subspace(m);
}

Subspace Subspace::complement() const {
  Subspace s;
  s.frame_ = orthogonal_complement(frame_);
  return s;
}

Subspace Subspace::image(const Matrix& m) const {
  if (m.cols() != frame_.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix/subspace size");
  const Matrix basis = graded_column_basis(m * frame_);
  if (basis.cols() != frame_.cols()) throw Error(ErrorCode::NumericalFailure, "image lost rank");
  return Subspace(basis);
}

namespace {

// Singular values of (I - P_B) A for orthonormal frames; ascending.
Eigen::VectorXd residual_sines(const Matrix& a, const Matrix& b) {
  const Matrix r = a - b * (b.adjoint() * a);
  Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(r).singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) {
    throw Error(ErrorCode::DimensionMismatch, "subspaces live in different dimensions");
  }
}

}  // namespace

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  // Project the smaller subspace off the larger one so the residual has
  // exactly min(k_a, k_b) singular values.
  const bool a_small = a.dim() <= b.dim();
  const Matrix& small = a_small ? a.frame() : b.frame();
  const Matrix& large = a_small ? b.frame() : a.frame();
  const auto n = small.cols();
  std::vector<double> out;
  if (n == 0) return out;

  Eigen::VectorXd cosines = Eigen::JacobiSVD<Matrix>(large.adjoint() * small).singularValues();
  std::vector<double> c(cosines.data(), cosines.data() + cosines.size());
  std::sort(c.begin(), c.end(), std::greater<>());
  const Eigen::VectorXd s = residual_sines(small, large);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double ci = std::clamp(c[static_cast<std::size_t>(i)], -1.0, 1.0);
    const double si = std::clamp(s(i), 0.0, 1.0);
    out.push_back(ci * ci <= 0.5 ? std::acos(ci) : std::asin(si));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double angle_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "angle distance needs equal dimensions");
  const auto angles = principal_angles(a, b);
  return angles.empty() ? 0.0 : angles.back();
}

double transversality_margin(const Subspace& v, const Subspace& w) {
  require_same_ambient(v, w);
  if (v.dim() + w.dim() != v.ambient()) {
    throw Error(ErrorCode::DimensionMismatch, "dim V + dim W must equal d");
  }
  if (v.dim() == 0 || w.dim() == 0) return 1.0;
  return residual_sines(v.frame(), w.frame())(0);
}

Flag make_flag(Subspace v, Subspace w, double tol) {
  require_same_ambient(v, w);
  if (v.dim() + w.dim() != v.ambient()) {
    throw Error(ErrorCode::DimensionMismatch, "flag needs dim V + dim W = d");
  }
  Flag f{std::move(v), std::move(w)};
  if (f.V.dim() <= f.W.dim() && containment_defect(f) > tol) {
    throw Error(ErrorCode::DimensionMismatch, "V is not contained in W");
  }
  return f;
}

double containment_defect(const Flag& f) {
  if (f.V.dim() == 0) return 0.0;
  const Eigen::VectorXd s = residual_sines(f.V.frame(), f.W.frame());
  return std::asin(std::clamp(s(s.size() - 1), 0.0, 1.0));
}

Transversality flags_transverse(const Flag& x, const Flag& y, double tol) {
  if (x.k() != y.k() || x.d() != y.d()) {
    throw Error(ErrorCode::DimensionMismatch, "flags of different type");
  }
  const double m = std::min(transversality_margin(x.V, y.W), transversality_margin(y.V, x.W));
  return {m > tol, m};
}

double flag_distance(const Flag& x, const Flag& y) {
  return std::max(angle_distance(x.V, y.V), angle_distance(x.W, y.W));
}

FlagClusters cluster_flags(const std::vector<Flag>& points, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "cluster radius must be positive");
  const std::size_t n = points.size();
  const std::vector<double> dist = pairwise_flag_distances(points);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist[i * n + j] <= radius) parent[find(i)] = find(j);

  FlagClusters out;
  out.assignment.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<int>(out.members.size());
      out.members.emplace_back();
      out.representatives.push_back(static_cast<int>(i));
    }
    out.assignment[i] = id_of_root[r];
    out.members[id_of_root[r]].push_back(static_cast<int>(i));
  }
  out.min_inter = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.assignment[i] == out.assignment[j]) {
        out.max_intra = std::max(out.max_intra, dist[i * n + j]);
      } else {
        out.min_inter = std::min(out.min_inter, dist[i * n + j]);
      }
    }
  return out;
}

}  // namespace relanosov
