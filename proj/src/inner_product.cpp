#include "relanosov/inner_product.hpp"

#include <cmath>

#include "relanosov/error.hpp"

namespace relanosov {

InnerProduct::InnerProduct(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0) {
    throw Error(ErrorCode::NotPositiveDefinite, "gram matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
  if ((gram_ - gram_.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::NotPositiveDefinite, "gram matrix is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "gram matrix has a nonpositive eigenvalue");
  }
}

double InnerProduct::norm(const Vector& v) const {
  if (v.size() != gram_.rows()) throw Error(ErrorCode::DimensionMismatch, "vector size");
  return std::sqrt(std::max(0.0, (v.adjoint() * gram_ * v)(0, 0).real()));
}

InnerProduct interpolate_inner_products(const InnerProduct& a, const InnerProduct& b, double t) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "forms of different size");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  // Whiten A, diagonalize the whitened B; columns of L^-H Q are orthogonal
  // for both forms.
  const Eigen::LLT<Matrix> llt(a.gram());
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "cholesky failed");
  const Matrix L = llt.matrixL();
  const Matrix Linv = L.inverse();
  Matrix c = Linv * b.gram() * Linv.adjoint();
  c = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "pencil eigensolver");
  Eigen::VectorXd lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (!(lam(i) > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "second form not definite");
    lam(i) = std::pow(lam(i), t);
  }
  const Matrix lq = L * eig.eigenvectors();
  Matrix m = lq * lam.cast<Complex>().asDiagonal() * lq.adjoint();
  m = 0.5 * (m + m.adjoint());
  return InnerProduct(std::move(m));
}

double thin_metric_profile(const Vector& v1, const Vector& v2, const Vector& v3, double c, double t,
                           double T) {
  if (!(T > 0.0) || !(t >= 0.0) || !(t <= T)) {
    throw Error(ErrorCode::BadTime, "excursion time outside [0, T]");
  }
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidInput, "rate c must be positive");
  const double n1 = v1.norm(), n2 = v2.norm(), n3 = v3.norm();
  if (3.0 * t <= T) return std::exp(-c * t) * n1 + n2 + std::exp(c * t) * n3;
  if (3.0 * t >= 2.0 * T) return std::exp(c * (T - t)) * n1 + n2 + std::exp(-c * (T - t)) * n3;

  const auto d1 = v1.size(), d2 = v2.size(), d3 = v3.size();
  const auto d = d1 + d2 + d3;
  const double w = 2.0 * c * T / 3.0;
  Eigen::VectorXd da(d), db(d);
  da << Eigen::VectorXd::Constant(d1, std::exp(-w)), Eigen::VectorXd::Ones(d2),
      Eigen::VectorXd::Constant(d3, std::exp(w));
  db << Eigen::VectorXd::Constant(d1, std::exp(w)), Eigen::VectorXd::Ones(d2),
      Eigen::VectorXd::Constant(d3, std::exp(-w));
  const InnerProduct a(da.cast<Complex>().asDiagonal().toDenseMatrix());
  const InnerProduct b(db.cast<Complex>().asDiagonal().toDenseMatrix());
  const double s = (3.0 * t - T) / T;
  Vector v(d);
  v << v1, v2, v3;
  return interpolate_inner_products(a, b, s).norm(v);
}

}  // namespace relanosov
