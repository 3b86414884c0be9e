#include "relanosov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "relanosov/error.hpp"

namespace relanosov {

Matrix from_real(const RealMatrix& m) { return m.cast<Complex>(); }

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto c = n == 0 ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Matrix m(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c) {
      throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool is_real(const Matrix& m, double tol) {
  return m.imag().cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix orthonormal_basis(const Matrix& columns, double rel_tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  const double top = s.size() > 0 ? s(0) : 0.0;
  while (rank < s.size() && s(rank) > rel_tol * top && s(rank) > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix graded_column_basis(const Matrix& a, const Eigen::VectorXd& row_log_scale) {
  const auto d = a.rows();
  const auto k = a.cols();
  if (row_log_scale.size() != d) throw Error(ErrorCode::DimensionMismatch, "one scale per row");
  Matrix e = a;
  std::vector<bool> row_used(static_cast<std::size_t>(d), false), col_done(static_cast<std::size_t>(k), false);
  std::vector<Eigen::Index> order;
  for (Eigen::Index step = 0; step < k; ++step) {
    Eigen::Index pr = -1, pc = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (col_done[static_cast<std::size_t>(j)]) continue;
      for (Eigen::Index r = 0; r < d; ++r) {
        if (row_used[static_cast<std::size_t>(r)] || e(r, j) == 0.0) continue;
        const double m = row_log_scale(r) + std::log(std::abs(e(r, j)));
        if (m > best) {
          best = m;
          pr = r;
          pc = j;
        }
      }
    }
    if (pc < 0) break;
    row_used[static_cast<std::size_t>(pr)] = col_done[static_cast<std::size_t>(pc)] = true;
    order.push_back(pc);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (col_done[static_cast<std::size_t>(j)] || e(pr, j) == 0.0) continue;
      const Complex f = e(pr, j) / e(pr, pc);
      e.col(j) -= f * e.col(pc);
      e(pr, j) = 0.0;
    }
  }
  Matrix c(d, static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto j = order[i];
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < d; ++r)
      if (e(r, j) != 0.0) top = std::max(top, row_log_scale(r) + std::log(std::abs(e(r, j))));
    for (Eigen::Index r = 0; r < d; ++r) {
      c(r, static_cast<Eigen::Index>(i)) = e(r, j) == 0.0 ? Complex(0.0) : e(r, j) * std::exp(row_log_scale(r) - top);
    }
    c.col(static_cast<Eigen::Index>(i)).normalize();
  }
  return orthonormal_basis(c);
}

Matrix graded_column_basis(const Matrix& a) { return graded_column_basis(a, Eigen::VectorXd::Zero(a.rows())); }

Matrix orthogonal_complement(const Matrix& frame) {
  const auto d = frame.rows();
  const auto k = frame.cols();
  if (k == 0) return Matrix::Identity(d, d);
  Eigen::JacobiSVD<Matrix> svd(frame, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(d - k);
}

}  // namespace relanosov
