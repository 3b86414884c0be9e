#pragma once

#include <vector>

#include "relanosov/linalg.hpp"

namespace relanosov {

// A linear subspace of K^d stored by an orthonormal frame (d x k).
class Subspace {
 public:
  Subspace() = default;
  // Orthonormalizes the given spanning columns; throws InvalidInput when the
  // columns are rank deficient.
  explicit Subspace(const Matrix& spanning_columns);

  static Subspace span(std::initializer_list<Vector> vectors);
  // span(e_i for i in indices), 0-based.
  static Subspace coordinate(int d, std::initializer_list<int> indices);

  const Matrix& frame() const noexcept { return frame_; }
  int dim() const noexcept { return static_cast<int>(frame_.cols()); }
  int ambient() const noexcept { return static_cast<int>(frame_.rows()); }

  Subspace complement() const;
  // m * this, re-orthonormalized.
  Subspace image(const Matrix& m) const;

 private:
  Matrix frame_;
};

// Principal angles in [0, pi/2], nondecreasing. Small angles come from the
// sines (projection residual) so they stay accurate below 1e-8.
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

// Largest principal angle between equal-dimensional subspaces.
double angle_distance(const Subspace& a, const Subspace& b);

// sin of the smallest principal angle between V and W (dim V + dim W = d):
// zero exactly when they intersect, one when orthogonal.
double transversality_margin(const Subspace& v, const Subspace& w);

struct Flag {
  Subspace V;  // dim k
  Subspace W;  // dim d - k

  int k() const noexcept { return V.dim(); }
  int d() const noexcept { return V.ambient(); }
};

// Throws DimensionMismatch unless dim V + dim W = d and V lies in W within
// principal angle `tol`.
Flag make_flag(Subspace v, Subspace w, double tol = 1e-8);

// Largest principal angle of V against W restricted to the first dim V
// directions: zero when V is contained in W.
double containment_defect(const Flag& f);

struct Transversality {
  bool transverse = false;
  double margin = 0.0;
};

Transversality flags_transverse(const Flag& x, const Flag& y, double tol = 1e-6);

// max(d(V,V'), d(W,W')).
double flag_distance(const Flag& x, const Flag& y);

struct FlagClusters {
  std::vector<int> assignment;              // cluster id per input point
  std::vector<std::vector<int>> members;    // point indices per cluster
  std::vector<int> representatives;         // first member of each cluster
  double max_intra = 0.0;                   // largest distance within a cluster
  double min_inter = 0.0;                   // smallest distance across clusters (inf if one)
};

// Single-linkage clustering at the given radius. Cluster ids follow the
// first appearance in input order.
FlagClusters cluster_flags(const std::vector<Flag>& points, double radius);

}  // namespace relanosov
