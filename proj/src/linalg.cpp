#include "specgal/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

namespace specgal::linalg {

namespace {

lapack_complex_double* lp(Matrix& m) { return reinterpret_cast<lapack_complex_double*>(m.data()); }

const Complex kOne{1.0, 0.0};

// Sort eigenpairs by (Re, Im) in place.
void sort_pairs(EigenPairs& p) {
  const Index n = p.values.size();
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index i, Index j) {
    const Complex a = p.values(i), b = p.values(j);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  Vector values(n);
  Matrix vectors(p.vectors.rows(), n);
  RealVector res(n);
  for (Index i = 0; i < n; ++i) {
    values(i) = p.values(perm[i]);
    vectors.col(i) = p.vectors.col(perm[i]);
    res(i) = p.residual_norms(perm[i]);
  }
  p.values = std::move(values);
  p.vectors = std::move(vectors);
  p.residual_norms = std::move(res);
}

// ||A v_i - z_i B v_i||_2 / ||v_i||_B with ||v_i||_B = 1 by construction;
// the B-norm is still evaluated from B v_i rather than assumed.
RealVector residuals(const Matrix& a, const Matrix& b, const Vector& values, const Matrix& v) {
  const Matrix av = gemm(a, v);
  const Matrix bv = gemm(b, v);
  RealVector r(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    const double bnorm = std::sqrt(std::abs(v.col(i).dot(bv.col(i))));
    r(i) = (av.col(i) - values(i) * bv.col(i)).norm() / (bnorm > 0 ? bnorm : 1.0);
  }
  return r;
}

}  // namespace

Matrix cholesky_factor(const Matrix& b) {
  require_square(b, "cholesky");
  Matrix l = b;
  const lapack_int n = static_cast<lapack_int>(b.rows());
  const lapack_int info = LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'L', n, lp(l), n);
  if (info > 0)
    throw Error(Errc::not_positive_definite,
                "matrix not positive-definite: Cholesky failed at pivot " + std::to_string(info - 1),
                info - 1);
  if (info < 0)
    throw Error(Errc::invalid_argument, "zpotrf: illegal argument " + std::to_string(-info));
  l.triangularView<Eigen::StrictlyUpper>().setZero();
  return l;
}

Matrix whiten(const Matrix& a, const Matrix& l) {
  const Index n = a.rows();
  Matrix c = a;
  // c <- L^{-1} c, then c <- c L^{-H}
  cblas_ztrsm(CblasColMajor, CblasLeft, CblasLower, CblasNoTrans, CblasNonUnit,
              n, n, &kOne, l.data(), n, c.data(), n);
  cblas_ztrsm(CblasColMajor, CblasRight, CblasLower, CblasConjTrans, CblasNonUnit,
              n, n, &kOne, l.data(), n, c.data(), n);
  return c;
}

Matrix gemm(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  const Complex zero{0.0, 0.0};
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, a.rows(), b.cols(), a.cols(),
              &kOne, a.data(), a.rows(), b.data(), b.rows(), &zero, c.data(), c.rows());
  return c;
}

EigenPairs hermitian_generalized_eig(const Matrix& a, const Matrix& b) {
  require_hermitian(a, "hermitian_generalized_eig: A");
  require_hermitian(b, "hermitian_generalized_eig: B");
  if (a.rows() != b.rows())
    throw Error(Errc::dimension_mismatch, "hermitian_generalized_eig: A and B sizes differ");

  const Index n = a.rows();
  const Matrix l = cholesky_factor(b);
  Matrix c = whiten(a, l);
  c = ((c + c.adjoint()) / 2.0).eval();

  RealVector w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), lp(c),
                     static_cast<lapack_int>(n), w.data());
  if (info != 0)
    throw Error(Errc::no_convergence, "zheevd failed to converge (info=" + std::to_string(info) + ")",
                info);

  // Map whitened vectors back: V = L^{-H} W keeps V^H B V = W^H W = I.
  Matrix v = c;
  cblas_ztrsm(CblasColMajor, CblasLeft, CblasLower, CblasConjTrans, CblasNonUnit,
              n, n, &kOne, l.data(), n, v.data(), n);

  EigenPairs out;
  out.values = w.cast<Complex>();
  out.vectors = std::move(v);
  out.residual_norms = residuals(a, b, out.values, out.vectors);
  return out;  // zheevd returns ascending order already
}

EigenPairs general_pencil_eig(const Matrix& a, const Matrix& b) {
  require_square(a, "general_pencil_eig: A");
  require_hermitian(b, "general_pencil_eig: B");
  if (a.rows() != b.rows())
    throw Error(Errc::dimension_mismatch, "general_pencil_eig: A and B sizes differ");

  const Index n = a.rows();
  const Matrix l = cholesky_factor(b);
  Matrix c = whiten(a, l);

  Vector w(n);
  Matrix vr(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), lp(c),
                    static_cast<lapack_int>(n), reinterpret_cast<lapack_complex_double*>(w.data()),
                    nullptr, 1, lp(vr), static_cast<lapack_int>(n));
  if (info > 0)
    throw Error(Errc::no_convergence,
                "QR iteration failed: eigenvalues 0.." + std::to_string(info - 1) + " unconverged",
                info - 1);
  if (info < 0)
    throw Error(Errc::invalid_argument, "zgeev: illegal argument " + std::to_string(-info));

  // zgeev vectors are unit 2-norm, so the mapped vectors are unit B-norm.
  Matrix v = vr;
  cblas_ztrsm(CblasColMajor, CblasLeft, CblasLower, CblasConjTrans, CblasNonUnit,
              n, n, &kOne, l.data(), n, v.data(), n);

  EigenPairs out;
  out.values = std::move(w);
  out.vectors = std::move(v);
  out.residual_norms = residuals(a, b, out.values, out.vectors);
  sort_pairs(out);
  return out;
}

RealVector singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  Matrix copy = a;
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  RealVector s(std::min(a.rows(), a.cols()));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(copy), m, s.data(),
                                         nullptr, 1, nullptr, 1);
  if (info != 0)
    throw Error(Errc::no_convergence, "zgesdd failed (info=" + std::to_string(info) + ")", info);
  return s;
}

double smallest_singular_value(const Matrix& a) {
  const RealVector s = singular_values(a);
  return s(s.size() - 1);
}

double largest_singular_value(const Matrix& a) {
  return singular_values(a)(0);
}

Matrix orthonormalize_in(const Matrix& columns, const Matrix& inner, double rank_tol) {
  require_hermitian(inner, "orthonormalize_in: inner");
  if (columns.cols() == 0) return columns;
  if (columns.rows() != inner.rows())
    throw Error(Errc::dimension_mismatch, "orthonormalize_in: column length does not match inner product");

  Matrix q = columns;
  std::vector<double> initial_norm(q.cols());
  for (Index j = 0; j < q.cols(); ++j)
    initial_norm[j] = std::sqrt(std::abs(q.col(j).dot(inner * q.col(j))));

  for (Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(inner * q.col(j)) * q.col(i);
    const double norm = std::sqrt(std::abs(q.col(j).dot(inner * q.col(j))));
    if (!(norm > rank_tol * (initial_norm[j] > 0 ? initial_norm[j] : 1.0)))
      throw Error(Errc::rank_deficient,
                  "orthonormalize_in: column " + std::to_string(j) + " is numerically dependent", j);
    q.col(j) /= norm;
  }
  return q;
}

}  // namespace specgal::linalg
