#pragma once

#include <vector>

#include "relanosov/flags.hpp"
#include "relanosov/group.hpp"
#include "relanosov/linalg.hpp"
#include "relanosov/word.hpp"

namespace relanosov {

// e^{log_scale} * entries, with |det| tracked separately in log form so the
// smallest singular value survives when it drops below double resolution.
// Entries are rescaled by exact powers of two, which keeps zero patterns
// intact; the power of two is counted in an integer so repeated squaring
// does not amplify rounding in the scale.
class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  explicit ScaledMatrix(const Matrix& m);
  ScaledMatrix(Matrix entries, double log_scale, double log_abs_det);

  static ScaledMatrix identity(int d);

  const Matrix& entries() const noexcept { return entries_; }
  double log_scale() const noexcept;
  double log_abs_det() const noexcept { return log_abs_det_; }
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }

  // The true matrix; overflows for long products.
  Matrix value() const;

  // Rescale so the largest entry lies in [1, 2).
  void renormalize();

  // this * m for a plain matrix with known log|det|; renormalizes only when
  // asked so callers can batch several factors.
  void right_multiply(const Matrix& m, double log_abs_det, bool renormalize_now);

  // Same scale, different entries (used when splitting into blocks).
  ScaledMatrix with_entries(Matrix entries, double log_abs_det) const;

  ScaledMatrix& operator*=(const ScaledMatrix& rhs);
  friend ScaledMatrix operator*(ScaledMatrix lhs, const ScaledMatrix& rhs) { return lhs *= rhs; }

  ScaledMatrix inverse() const;

 private:
  Matrix entries_;
  long long exp2_ = 0;
  double log_extra_ = 0.0;
  double log_abs_det_ = 0.0;
};

// A product kept as independent diagonal blocks so that blocks of very
// different size never share one floating-point scale. Powers may also carry
// a change of basis: the product is then basis * diag(parts) * basis^-1, with
// `blocks` indexing basis columns.
struct BlockProduct {
  int dim = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<ScaledMatrix> parts;
  Matrix basis, basis_inverse;  // empty: the standard basis

  bool has_basis() const noexcept { return basis.size() != 0; }
  ScaledMatrix assemble() const;
  BlockProduct inverse() const;
};

// p V, computed block by block with each block's own scale so that blocks
// far apart in size do not wipe each other out. NumericalFailure if the
// image loses rank.
Subspace image_subspace(const BlockProduct& p, const Subspace& v);

// Splits a matrix along the connected components of its nonzero pattern.
BlockProduct split_blocks(const ScaledMatrix& m);

BlockProduct evaluate_blocks(const MarkedGroup& g, const Word& w);
// this * g(x) on a product laid out along g.blocks(), for prefix scans.
void append_letter(BlockProduct& p, const MarkedGroup& g, Letter x, bool renormalize_now);
ScaledMatrix evaluate(const MarkedGroup& g, const Word& w);

// m^n by squaring, blockwise along m's own nonzero pattern. Negative n
// raises the inverse. A non-triangular block is powered through its sorted
// Schur form: eigenvalues that agree to 1e-6 relative are taken equal (a
// Jordan block stored in floating point splits them by about sqrt(eps), which
// a huge power would blow up), and when the moduli fall into separate
// clusters the block is split along its spectral subspaces so that each
// cluster keeps its own scale.
BlockProduct power(const BlockProduct& m, long long n);
BlockProduct power(const MarkedGroup& g, const Word& w, long long n);

struct SingularData {
  Eigen::VectorXd log_sigma;  // nonincreasing
  Matrix left;                // columns u_1..u_d
  Matrix right;               // columns v_1..v_d

  int dim() const noexcept { return static_cast<int>(log_sigma.size()); }
  // log(sigma_k / sigma_{k+1}), 1 <= k < d.
  double log_gap(int k) const;
  std::vector<double> gaps() const;
};

SingularData singular_data(const ScaledMatrix& m);
SingularData singular_data(const BlockProduct& m);

constexpr double kDefaultGapTol = 1e-8;

// Top-k left singular subspace; NoGap when log gap at k <= tol.
Subspace uk_subspace(const SingularData& s, int k, double tol = kDefaultGapTol);
Subspace uk_subspace(const ScaledMatrix& m, int k, double tol = kDefaultGapTol);

// g^-1 (U_k(g))^perp, computed by applying the inverse to the complement.
Subspace u_dk_inverse(const ScaledMatrix& m, int k, double tol = kDefaultGapTol);

// (U_k(g), U_{d-k}(g)); needs gaps at k and d-k.
Flag limit_flag(const SingularData& s, int k, double tol = kDefaultGapTol);

// Both sides of the two angle estimates. The left sides use sin of the
// largest principal angle (the projector-norm distance); measured in radians
// the estimates fail once the right side exceeds about 1. The radian values
// are kept alongside for reporting.
struct BpsCheck {
  double lhs1 = 0.0, rhs1 = 0.0;  // d(U_k(g), U_k(gh)) vs |h||h^-1| s_{k+1}(g)/s_k(g)
  double lhs2 = 0.0, rhs2 = 0.0;  // d(g U_k(h), U_k(gh)) vs |g||g^-1| s_{k+1}(h)/s_k(h)
  double angle1 = 0.0, angle2 = 0.0;  // the same distances in radians
  bool part2 = true;                  // false when h has no gap at k

  bool holds(double slack = 1e-9) const {
    return lhs1 <= rhs1 + slack && (!part2 || lhs2 <= rhs2 + slack);
  }
};

// Norms are operator norms. Part (1) needs gaps for g and gh (NoGap
// otherwise); part (2) is skipped when h has none.
BpsCheck check_bps_bounds(const ScaledMatrix& g, const ScaledMatrix& h, int k,
                          double tol = kDefaultGapTol);

}  // namespace relanosov
