#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specgal/types.hpp"

namespace specgal::problems {

enum class ProblemKind { fourier_rank_one, block_fem, synthetic_dense };

// Built-in operator families. Levels parameterize the nested trial spaces:
//   fourier_rank_one : level n >= 1 is the frequency half-width, dim 2n+1
//   block_fem        : level N >= 2 is the element count of the uniform mesh (h = 1/N),
//                      trial space (P1 Dirichlet) + (P1 free), dim 2N
//   synthetic_dense  : level k in 1..len(eigenvalues) selects the leading k coordinates
struct ProblemSpec {
  ProblemKind kind = ProblemKind::synthetic_dense;
  std::vector<double> synthetic_eigenvalues;
  std::uint64_t synthetic_seed = 0;

  static ProblemSpec fourier_rank_one();
  static ProblemSpec block_fem();
  static ProblemSpec synthetic_dense(std::vector<double> eigenvalues, std::uint64_t seed);

  int full_level() const;  // synthetic: len(eigenvalues); others: no single full level
};

struct FormMatrices {
  Matrix t_hat;                 // entries t(phi_j, phi_i)
  Matrix mass;                  // entries <phi_j, phi_i>
  std::optional<Matrix> a_hat;  // entries <A phi_j, phi_i>, when a perturbation is attached
  Index dim = 0;
  std::string space_id;
};

struct NestedSpaces {
  Index coarse_dim = 0;
  Index fine_dim = 0;
  Matrix embedding;  // fine_dim x coarse_dim, injective
  // True when the coarse space is a subspace of the fine one (Fourier/synthetic
  // selection, divisible FEM meshes); false for FEM interpolation onto a
  // non-divisible finer mesh.
  bool exact = true;
};

struct ReferenceSpectrum {
  std::vector<std::pair<double, int>> eigenvalues;  // (value, multiplicity), ascending
  std::vector<std::pair<double, double>> essential_intervals;
};

// (1/2pi) \int_{-pi}^{pi} a(x) e^{imx} dx for the piecewise-linear symbol of
// the Fourier example: 0 at m=0, i/m for even m, 3i/m for odd m.
Complex fourier_symbol_coefficient(long m);

// Closed-form eigenvalue branches of the block operator: sign = +1 or -1.
double block_fem_lambda(int k, int sign);

FormMatrices assemble(const ProblemSpec& problem, int level);
NestedSpaces embed(const ProblemSpec& problem, int coarse_level, int fine_level);
ReferenceSpectrum reference_spectrum(const ProblemSpec& problem);

// Exact eigenvectors of the full synthetic operator (column j pairs with
// synthetic_eigenvalues[j]); mass is the identity there.
Matrix synthetic_eigenbasis(const ProblemSpec& problem);

}  // namespace specgal::problems
