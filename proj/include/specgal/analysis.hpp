#pragma once

#include <utility>
#include <vector>

#include "specgal/dissipative.hpp"

namespace specgal::analysis {

// delta(U, V) = sin of the largest principal angle from span(U) to span(V) in
// the given Hermitian positive-definite inner product; 1 when dim U > dim V.
double subspace_gap(const Matrix& u, const Matrix& v, const Matrix& inner);

// delta-hat: max of both directions.
double subspace_gap_symmetric(const Matrix& u, const Matrix& v, const Matrix& inner);

// epsilon = ||(I - Q) E(Delta)|| over the exact eigenspace spanned by
// `exact_basis` (synthetic problems), computed via singular values in the
// mass inner product.
double projection_defect(const dissipative::ProjectionQ& q, const Matrix& exact_basis,
                         const Matrix& mass);

struct RateFit {
  std::vector<std::pair<double, double>> levels;  // (level, error)
  double slope = 0;      // least-squares slope of log(error) vs log(level)
  double intercept = 0;
  double r_squared = 0;
  double order() const { return -slope; }  // convergence order when error ~ level^-order
};

// Least-squares fit on log-log data; needs >= 4 points with positive levels
// and errors.
RateFit fit_rate(const std::vector<std::pair<double, double>>& level_error);

// The form-norm inner product T-hat - (spectral_min - 1) M, positive-definite
// for spectral_min <= min sigma(T, L_n).
Matrix t_inner(const problems::FormMatrices& fm, double spectral_min);

}  // namespace specgal::analysis
