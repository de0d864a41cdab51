#pragma once

// Dense complex matrices as elements of the C*-algebra M_n(C) with the
// operator 2-norm. Everything else in the library is built on these helpers.

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "specdist/error.hpp"

namespace specdist {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Throws unless `a` is non-empty, square and has only finite entries.
void require_valid(const ComplexMatrix& a, std::string_view what = "matrix");
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(Eigen::Index dim);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);
double smallest_singular_value(const ComplexMatrix& a);
double spectral_radius(const ComplexMatrix& a);
ComplexVector eigenvalues(const ComplexMatrix& a);

struct EigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix basis;          // columns are unit eigenvectors
  ComplexMatrix basis_inverse;  // zero when the basis is numerically singular
  double diag_residual = 0.0;   // ||a - P diag(lambda) P^{-1}||, +inf if P singular
  double condition_estimate = 0.0;
  bool diagonalizable = false;
};

/// diag_residual threshold for the diagonalizable verdict: 1e-8 * (1 + ||a||).
double diagonalizable_tolerance(const ComplexMatrix& a);

/// Never throws for defective input; the verdict is carried in the result.
EigenDecomposition eigendecompose(const ComplexMatrix& a);

/// Scaling and squaring with diagonal Pade approximants (degrees 3..13).
ComplexMatrix mat_exp(const ComplexMatrix& a);

/// Throws ErrorCode::Singular when sigma_min <= 1e-12 * sigma_max.
ComplexMatrix mat_inverse(const ComplexMatrix& a);
bool is_invertible(const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);

/// ||a a* - a* a|| <= tol
bool is_normal(const ComplexMatrix& a, double tol);

/// a^n for any integer n; negative powers go through mat_inverse.
ComplexMatrix mat_power(const ComplexMatrix& a, long n);

}  // namespace specdist
