#pragma once

#include "specgal/types.hpp"

namespace specgal::linalg {

struct EigenPairs {
  Vector values;                // deterministic order (real asc, then imag)
  Matrix vectors;               // columns, B-normalized
  RealVector residual_norms;    // ||A v - z B v||_2 / ||v||_B per pair

  Index size() const { return values.size(); }
};

// Lower Cholesky factor of a Hermitian positive-definite matrix, b = L L^H.
// Throws Errc::not_positive_definite carrying the failing pivot index.
Matrix cholesky_factor(const Matrix& b);

// L^{-1} a L^{-H} for a lower-triangular l.
Matrix whiten(const Matrix& a, const Matrix& l);

// BLAS-backed product (column-major zgemm).
Matrix gemm(const Matrix& a, const Matrix& b);

// Eigenpairs of the Hermitian pencil A x = z B x, B Hermitian positive-definite.
// Values are real, sorted ascending; vectors satisfy V^H B V = I.
EigenPairs hermitian_generalized_eig(const Matrix& a, const Matrix& b);

// Eigenpairs of the general pencil A x = z B x with B Hermitian positive-definite,
// reduced via B = L L^H to the standard problem L^{-1} A L^{-H}.
EigenPairs general_pencil_eig(const Matrix& a, const Matrix& b);

// Singular values, descending.
RealVector singular_values(const Matrix& a);

double smallest_singular_value(const Matrix& a);
double largest_singular_value(const Matrix& a);

// Modified Gram-Schmidt in the `inner` inner product with one re-orthogonalization
// pass. Column order is preserved; throws Errc::rank_deficient naming the first
// numerically dependent column.
Matrix orthonormalize_in(const Matrix& columns, const Matrix& inner, double rank_tol = 1e-10);

}  // namespace specgal::linalg
