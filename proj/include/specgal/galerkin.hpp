#pragma once

#include <string>
#include <vector>

#include "specgal/linalg.hpp"
#include "specgal/problems.hpp"

namespace specgal::galerkin {

struct Spectrum {
  linalg::EigenPairs pairs;
  std::string space_id;
  bool hermitian = false;
};

// Real window Delta = [a, b]; gamma is the inverse-mode shift (resolvent
// coordinates w = 1/(mu - gamma)).
struct SpectralWindow {
  double a = 0;
  double b = 0;
  std::optional<double> gamma;
};

struct WindowSelection {
  std::vector<Index> indices;
  Matrix vectors;  // mass-orthonormal columns, one per selected index
  bool empty() const { return indices.empty(); }
};

// sigma(T, L_n): Hermitian pencil (T-hat, M).
Spectrum spectrum_of_t(const problems::FormMatrices& fm);

// sigma(T+A, L_n): general pencil (T-hat + A-hat, M). Requires a_hat.
Spectrum spectrum_of_t_plus_a(const problems::FormMatrices& fm);

// sigma_n(z) = sigma_min(L^{-1}(T-hat + A-hat - z M)L^{-H}), M = L L^H.
// Zero exactly when z is a pencil eigenvalue (to rank tolerance).
double sigma_n(const problems::FormMatrices& fm, Complex z);

// Indices of eigenvalues in the closed window [a, b] (endpoint ties included)
// with mass-orthonormal eigenvectors; empty selection is a valid result.
WindowSelection select_window(const Spectrum& spec, const SpectralWindow& window,
                              const Matrix& mass);

// Map a Hermitian spectrum to resolvent coordinates w = 1/(mu - gamma) (same
// eigenvectors, re-sorted ascending). Requires gamma < min mu.
Spectrum to_resolvent(const Spectrum& spec, double gamma);

}  // namespace specgal::galerkin
