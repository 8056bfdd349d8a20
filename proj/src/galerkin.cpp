#include "specgal/galerkin.hpp"

#include <algorithm>
#include <cmath>

namespace specgal::galerkin {

namespace {

void check_fm(const problems::FormMatrices& fm) {
  require_square(fm.t_hat, "FormMatrices.t_hat");
  require_square(fm.mass, "FormMatrices.mass");
  if (fm.t_hat.rows() != fm.mass.rows() || fm.t_hat.rows() != fm.dim)
    throw Error(Errc::dimension_mismatch, "FormMatrices: inconsistent dimensions");
  if (fm.a_hat && (fm.a_hat->rows() != fm.dim || fm.a_hat->cols() != fm.dim))
    throw Error(Errc::dimension_mismatch, "FormMatrices: a_hat dimension mismatch");
}

}  // namespace

Spectrum spectrum_of_t(const problems::FormMatrices& fm) {
  check_fm(fm);
  Spectrum s;
  s.pairs = linalg::hermitian_generalized_eig(fm.t_hat, fm.mass);
  s.space_id = fm.space_id;
  s.hermitian = true;
  return s;
}

Spectrum spectrum_of_t_plus_a(const problems::FormMatrices& fm) {
  check_fm(fm);
  if (!fm.a_hat)
    throw Error(Errc::invalid_argument, "spectrum_of_t_plus_a: a_hat is missing");
  Spectrum s;
  s.pairs = linalg::general_pencil_eig(fm.t_hat + *fm.a_hat, fm.mass);
  s.space_id = fm.space_id;
  s.hermitian = false;
  return s;
}

double sigma_n(const problems::FormMatrices& fm, Complex z) {
  check_fm(fm);
  Matrix shifted = fm.t_hat - z * fm.mass;
  if (fm.a_hat) shifted += *fm.a_hat;
  const Matrix l = linalg::cholesky_factor(fm.mass);
  return linalg::smallest_singular_value(linalg::whiten(shifted, l));
}

WindowSelection select_window(const Spectrum& spec, const SpectralWindow& window,
                              const Matrix& mass) {
  if (!spec.hermitian)
    throw Error(Errc::invalid_argument, "select_window: spectrum must be Hermitian");
  if (!(window.a < window.b))
    throw Error(Errc::invalid_argument, "select_window: window requires a < b");

  WindowSelection sel;
  for (Index i = 0; i < spec.pairs.size(); ++i) {
    const double v = spec.pairs.values(i).real();
    if (v >= window.a && v <= window.b) sel.indices.push_back(i);
  }
  sel.vectors = Matrix(spec.pairs.vectors.rows(), Index(sel.indices.size()));
  for (Index j = 0; j < Index(sel.indices.size()); ++j)
    sel.vectors.col(j) = spec.pairs.vectors.col(sel.indices[j]);

  if (!sel.indices.empty()) {
    const Matrix gram = sel.vectors.adjoint() * mass * sel.vectors;
    const double defect = (gram - Matrix::Identity(gram.rows(), gram.cols())).norm();
    if (defect > 1e-10) sel.vectors = linalg::orthonormalize_in(sel.vectors, mass);
  }
  return sel;
}

Spectrum to_resolvent(const Spectrum& spec, double gamma) {
  if (!spec.hermitian)
    throw Error(Errc::invalid_argument, "to_resolvent: spectrum must be Hermitian");
  const Index n = spec.pairs.size();
  if (n > 0 && spec.pairs.values(0).real() <= gamma)
    throw Error(Errc::invalid_argument,
                "to_resolvent: gamma=" + std::to_string(gamma) +
                    " is not below the smallest Galerkin eigenvalue");
  Spectrum out;
  out.hermitian = true;
  out.space_id = spec.space_id + ":resolvent";
  out.pairs.values.resize(n);
  out.pairs.vectors.resize(spec.pairs.vectors.rows(), n);
  out.pairs.residual_norms.resize(n);
  // mu ascending > gamma means w = 1/(mu - gamma) is descending; reverse.
  for (Index i = 0; i < n; ++i) {
    const Index src = n - 1 - i;
    out.pairs.values(i) = 1.0 / (spec.pairs.values(src).real() - gamma);
    out.pairs.vectors.col(i) = spec.pairs.vectors.col(src);
    out.pairs.residual_norms(i) = spec.pairs.residual_norms(src);
  }
  return out;
}

}  // namespace specgal::galerkin
