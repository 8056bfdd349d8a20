#pragma once

// Test-only reference computations, kept independent of the library's
// LAPACK-backed implementation path.

#include <cstdint>
#include <functional>
#include <vector>

#include "specgal/types.hpp"

namespace specgal::testing {

// Cyclic complex Jacobi eigensolver for Hermitian matrices. Values ascending.
RealVector jacobi_hermitian_eigenvalues(const Matrix& a);

// Jacobi with accumulated eigenvectors (a = V diag(w) V^H).
void jacobi_hermitian(const Matrix& a, RealVector& values, Matrix& vectors);

// Generalized Hermitian pencil A x = z B x via B^{-1/2} built from the Jacobi
// decomposition of B (no Cholesky anywhere on this path). Values ascending.
RealVector jacobi_generalized_eigenvalues(const Matrix& a, const Matrix& b);

// Roots of det(A - z B) by Weierstrass (Durand-Kerner) iteration with LU
// determinant evaluation. Intended for small well-scaled pencils (B near I).
// Returned sorted by (Re, Im).
std::vector<Complex> pencil_roots_weierstrass(const Matrix& a, const Matrix& b);

// Panel Gauss-Legendre quadrature of a complex integrand on [a, b].
Complex gauss_legendre(const std::function<Complex(double)>& f, double a, double b,
                       int panels = 16, int order = 24);

Matrix random_complex(Index rows, Index cols, std::uint64_t seed);
Matrix random_hermitian(Index n, std::uint64_t seed);
// Hermitian positive-definite with eigenvalues in roughly [shift, shift + O(n)].
Matrix random_spd(Index n, std::uint64_t seed, double shift = 1.0);

}  // namespace specgal::testing
