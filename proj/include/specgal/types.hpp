#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace specgal {

// All dense matrices are Eigen column-major complex doubles.
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  not_hermitian,
  not_positive_definite,
  no_convergence,
  rank_deficient,
  io_error,
  config_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<Index> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  // Context index: failing Cholesky pivot, unconverged eigenvalue count, dependent column.
  std::optional<Index> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<Index> index_;
};

inline void require_finite(const Matrix& a, const char* name) {
  if (a.rows() <= 0 || a.cols() <= 0)
    throw Error(Errc::invalid_argument, std::string(name) + ": dimensions must be positive");
  if (!a.allFinite())
    throw Error(Errc::invalid_argument, std::string(name) + ": entries must be finite");
}

inline void require_square(const Matrix& a, const char* name) {
  require_finite(a, name);
  if (a.rows() != a.cols())
    throw Error(Errc::dimension_mismatch, std::string(name) + ": matrix must be square");
}

inline bool is_hermitian(const Matrix& a, double rel_tol = 1e-10) {
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= rel_tol * (scale > 0 ? scale : 1.0);
}

inline void require_hermitian(const Matrix& a, const char* name, double rel_tol = 1e-10) {
  require_square(a, name);
  if (!is_hermitian(a, rel_tol))
    throw Error(Errc::not_hermitian, std::string(name) + ": matrix is not Hermitian");
}

}  // namespace specgal
