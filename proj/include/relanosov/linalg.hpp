#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace relanosov {

// All linear algebra runs over the complex numbers; real representations are
// complex matrices with zero imaginary part.
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

enum class Field { Real, Complex };

Matrix from_real(const RealMatrix& m);
Matrix from_rows(const std::vector<std::vector<double>>& rows);
bool is_real(const Matrix& m, double tol = 0.0);
bool all_finite(const Matrix& m);

// Operator 2-norm (largest singular value).
double operator_norm(const Matrix& m);

// Orthonormal basis for the column span, via thin SVD so that rank deficiency
// is visible. Columns with singular value below rel_tol * max are dropped.
Matrix orthonormal_basis(const Matrix& columns, double rel_tol = 1e-12);

// Orthonormal basis for the span of the columns of diag(e^{row_log_scale}) a,
// for rows whose scales differ beyond double range. Gaussian elimination with
// complete pivoting on log magnitudes zeroes pivot rows exactly, so small rows
// keep their relative accuracy; the echelon columns are then normalized and
// orthonormalized. Rank-deficient input gives fewer columns.
Matrix graded_column_basis(const Matrix& a, const Eigen::VectorXd& row_log_scale);
Matrix graded_column_basis(const Matrix& a);

// Orthonormal basis of the orthogonal complement of an orthonormal frame.
Matrix orthogonal_complement(const Matrix& frame);

}  // namespace relanosov
