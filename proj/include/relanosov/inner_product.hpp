#pragma once

#include "relanosov/linalg.hpp"

namespace relanosov {

// A hermitian positive-definite form <u, v> = u^H G v.
class InnerProduct {
 public:
  // Throws NotPositiveDefinite unless the gram matrix is hermitian (within
  // 1e-9 relative) with a positive smallest eigenvalue.
  explicit InnerProduct(Matrix gram);

  static InnerProduct standard(int d) { return InnerProduct(Matrix::Identity(d, d)); }

  const Matrix& gram() const noexcept { return gram_; }
  int dim() const noexcept { return static_cast<int>(gram_.rows()); }
  double norm(const Vector& v) const;

 private:
  Matrix gram_;
};

// The form m(t) that is diagonal in a basis orthogonal for both A and B, with
// m(t)(v_i, v_i) = A(v_i, v_i)^{1-t} B(v_i, v_i)^t. Returns A at t = 0 and B
// at t = 1 exactly.
InnerProduct interpolate_inner_products(const InnerProduct& a, const InnerProduct& b, double t);

// Norm of v = v1 + v2 + v3 (components of a three-term splitting, stored as
// separate coordinate blocks) at time t of an excursion of length T:
//   t <= T/3:   e^{-ct}|v1| + |v2| + e^{ct}|v3|
//   t >= 2T/3:  e^{c(T-t)}|v1| + |v2| + e^{-c(T-t)}|v3|
//   otherwise:  the interpolated form between the two Euclidean-weighted
//               forms at T/3 and 2T/3, at s = (3t - T)/T.
double thin_metric_profile(const Vector& v1, const Vector& v2, const Vector& v3, double c, double t,
                           double T);

}  // namespace relanosov
