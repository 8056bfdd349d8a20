#include <doctest.h>

#include <cmath>

#include "specgal/analysis.hpp"
#include "specgal/dissipative.hpp"
#include "support/oracles.hpp"

using namespace specgal;
namespace pr = specgal::problems;
namespace ga = specgal::galerkin;
namespace di = specgal::dissipative;
namespace tt = specgal::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

pr::NestedSpaces identity_nesting(Index n) {
  pr::NestedSpaces ns;
  ns.coarse_dim = ns.fine_dim = n;
  ns.embedding = Matrix::Identity(n, n);
  return ns;
}

// Exact-projection Q for a synthetic problem: columns of the exact eigenbasis
// whose eigenvalue lies in [a, b].
di::ProjectionQ exact_projection(const pr::ProblemSpec& p, const pr::FormMatrices& fm, double a,
                                 double b) {
  const Matrix basis = pr::synthetic_eigenbasis(p);
  std::vector<Index> idx;
  for (Index j = 0; j < basis.cols(); ++j)
    if (p.synthetic_eigenvalues[j] >= a && p.synthetic_eigenvalues[j] <= b) idx.push_back(j);
  Matrix cols(basis.rows(), Index(idx.size()));
  for (Index j = 0; j < Index(idx.size()); ++j) cols.col(j) = basis.col(idx[j]);
  return di::build_projection(cols, identity_nesting(fm.dim), fm);
}

}  // namespace

TEST_SUITE("dissipative") {

TEST_CASE("build_projection: a single coordinate vector gives G = e1 e1^T") {
  pr::FormMatrices fm;
  fm.t_hat = Matrix::Zero(3, 3);
  fm.mass = Matrix::Identity(3, 3);
  fm.dim = 3;
  Matrix c = Matrix::Zero(3, 1);
  c(0, 0) = 1.0;
  const auto q = di::build_projection(c, identity_nesting(3), fm);
  CHECK(q.rank == 1);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  CHECK((q.gram_block - expected).norm() < 1e-14);
}

TEST_CASE("build_projection: pencil (G, M) eigenvalues are 0/1 (idempotence in H)") {
  const auto p = pr::ProblemSpec::block_fem();
  const auto fm = pr::assemble(p, 8);
  const auto s = ga::spectrum_of_t(fm);
  const auto sel = ga::select_window(s, {0.0, 30.0, std::nullopt}, fm.mass);
  REQUIRE(sel.indices.size() >= 2);
  const auto q = di::build_projection(sel.vectors, identity_nesting(fm.dim), fm);
  const auto pencil = linalg::hermitian_generalized_eig(q.gram_block, fm.mass);
  for (Index i = 0; i < pencil.size(); ++i) {
    const double mu = pencil.values(i).real();
    CHECK(std::min(std::abs(mu), std::abs(mu - 1.0)) < 1e-8);
  }
  const Matrix gram = q.coeffs.adjoint() * fm.mass * q.coeffs;
  CHECK((gram - Matrix::Identity(q.rank, q.rank)).norm() <= 1e-10);
}

TEST_CASE("build_projection on the Fourier coarse window has rank 4") {
  const auto p = pr::ProblemSpec::fourier_rank_one();
  const auto coarse = pr::assemble(p, 25);
  const auto fine = pr::assemble(p, 50);
  const auto sel = ga::select_window(ga::spectrum_of_t(coarse), {-kPi, kPi, std::nullopt},
                                     coarse.mass);
  const auto q = di::build_projection(sel.vectors, pr::embed(p, 25, 50), fine);
  CHECK(q.rank == 4);
}

TEST_CASE("build_projection rejects numerically dependent embedded columns") {
  pr::FormMatrices fm;
  fm.t_hat = Matrix::Zero(4, 4);
  fm.mass = Matrix::Identity(4, 4);
  fm.dim = 4;
  Matrix c(4, 2);
  c.col(0) = Vector::Ones(4).normalized();
  c.col(1) = c.col(0) * Complex(0.0, 1.0);  // same span
  CHECK_THROWS_AS(di::build_projection(c, identity_nesting(4), fm), Error);
}

TEST_CASE("dissipative_spectrum with rank-0 Q equals spectrum_of_t") {
  const auto p = pr::ProblemSpec::synthetic_dense({-1, 0.5, 2, 4}, 7);
  const auto fm = pr::assemble(p, 4);
  const auto q = di::build_projection(Matrix(4, 0), identity_nesting(4), fm);
  CHECK(q.rank == 0);
  const auto s0 = ga::spectrum_of_t(fm);
  const auto s1 = di::dissipative_spectrum(fm, q);
  for (Index i = 0; i < 4; ++i)
    CHECK(std::abs(s0.pairs.values(i) - s1.pairs.values(i)) < 1e-12);
}

TEST_CASE("exact projection lifts exactly the windowed eigenvalues by i") {
  const auto p = pr::ProblemSpec::synthetic_dense({-2, 0, 1, 1, 3, 6, 9}, 11);
  const auto fm = pr::assemble(p, 7);
  const auto q = exact_projection(p, fm, -0.5, 2.0);  // {0, 1, 1}
  CHECK(q.rank == 3);
  const auto s = di::dissipative_spectrum(fm, q);
  std::vector<Complex> expected = {{-2, 0}, {0, 1}, {1, 1}, {1, 1}, {3, 0}, {6, 0}, {9, 0}};
  REQUIRE(s.pairs.size() == 7);
  for (Index i = 0; i < 7; ++i) CHECK(std::abs(s.pairs.values(i) - expected[i]) < 1e-9);
}

TEST_CASE("dissipative spectrum lies in the strip 0 <= Im z <= 1") {
  const auto p = pr::ProblemSpec::fourier_rank_one();
  const auto coarse = pr::assemble(p, 10);
  const auto fine = pr::assemble(p, 25);
  const auto sel = ga::select_window(ga::spectrum_of_t(coarse), {-kPi, kPi, std::nullopt},
                                     coarse.mass);
  const auto q = di::build_projection(sel.vectors, pr::embed(p, 10, 25), fine);
  const auto s = di::dissipative_spectrum(fine, q);
  for (Index i = 0; i < s.pairs.size(); ++i) {
    CHECK(s.pairs.values(i).imag() >= -1e-8);
    CHECK(s.pairs.values(i).imag() <= 1.0 + 1e-8);
  }
}

TEST_CASE("Fourier problem: one eigenvalue near lambda_1 + i at dims (51, 1601)") {
  const double lam1 = -1.64834270;
  const auto p = pr::ProblemSpec::fourier_rank_one();
  const auto coarse = pr::assemble(p, 25);   // dim 51
  const auto fine = pr::assemble(p, 800);    // dim 1601
  const auto sel = ga::select_window(ga::spectrum_of_t(coarse), {-kPi, kPi, std::nullopt},
                                     coarse.mass);
  const auto q = di::build_projection(sel.vectors, pr::embed(p, 25, 800), fine);
  const auto s = di::dissipative_spectrum(fine, q);
  int near = 0;
  double best = 1e300;
  for (Index i = 0; i < s.pairs.size(); ++i) {
    const Complex z = s.pairs.values(i);
    if (z.imag() >= 0.5 && std::abs(z - Complex(lam1, 1.0)) <= 0.3) ++near;
    best = std::min(best, std::abs(z - Complex(lam1, 1.0)));
  }
  CHECK(near == 1);
  CHECK(best < 5e-2);
}

TEST_CASE("inverse mode with rank-0 Q gives the shifted Galerkin values") {
  const auto p = pr::ProblemSpec::synthetic_dense({1.0, 2.0, 5.0}, 3);
  const auto fm = pr::assemble(p, 3);
  const auto q = di::build_projection(Matrix(3, 0), identity_nesting(3), fm);
  const double gamma = -1.0;
  const auto z = di::inverse_dissipative_spectrum(fm, q, gamma);
  // z-values of the resolvent pencil equal the eigenvalues of (A1, M);
  // reciprocals are the
  // shifted-resolvent Galerkin values.
  std::vector<double> expected = {2.0, 3.0, 6.0};
  for (Index i = 0; i < 3; ++i) {
    CHECK(std::abs(z.pairs.values(i) - expected[i]) < 1e-10);
    CHECK(std::abs(1.0 / z.pairs.values(i) - 1.0 / expected[i]) < 1e-10);
  }
}

TEST_CASE("inverse mode with an exact projection reproduces 1/(lambda-gamma) + i") {
  const auto p = pr::ProblemSpec::synthetic_dense({1.0, 2.0, 5.0, 9.0}, 13);
  const auto fm = pr::assemble(p, 4);
  const double gamma = 0.0;
  // window in resolvent coordinates [0.4, 0.6] selects lambda = 2 (w = 0.5)
  const auto q = exact_projection(p, fm, 1.9, 2.1);
  CHECK(q.rank == 1);
  const auto z = di::inverse_dissipative_spectrum(fm, q, gamma);
  double best = 1e300;
  for (Index i = 0; i < 4; ++i)
    best = std::min(best, std::abs(1.0 / z.pairs.values(i) - Complex(0.5, 1.0)));
  CHECK(best < 1e-9);
  // numerical range of the reciprocals
  for (Index i = 0; i < 4; ++i) {
    const Complex w = 1.0 / z.pairs.values(i);
    CHECK(w.imag() >= -1e-8);
    CHECK(w.imag() <= 1.0 + 1e-8);
  }
}

TEST_CASE("inverse mode rejects gamma that is not below the spectrum") {
  const auto p = pr::ProblemSpec::synthetic_dense({1.0, 2.0}, 4);
  const auto fm = pr::assemble(p, 2);
  const auto q = di::build_projection(Matrix(2, 0), identity_nesting(2), fm);
  try {
    di::inverse_dissipative_spectrum(fm, q, 10.0);
    FAIL("expected not_positive_definite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
    CHECK(std::string(e.what()).find("10.0") != std::string::npos);
  }
}

TEST_CASE("cluster: a single lifted eigenvalue forms a multiplicity-1 cluster") {
  ga::Spectrum s;
  s.hermitian = false;
  s.pairs.values = Vector(1);
  s.pairs.values(0) = Complex(1.5, 1.0);
  s.pairs.vectors = Matrix::Identity(1, 1);
  s.pairs.residual_norms = RealVector::Zero(1);
  const auto report = di::cluster(s, {1.5}, 0.45, 0.5);
  REQUIRE(report.clusters.size() == 1);
  CHECK(report.clusters[0].multiplicity == 1);
  CHECK(std::abs(*report.clusters[0].mean - Complex(1.5, 1.0)) < 1e-15);
  CHECK(report.unassigned.empty());
}

TEST_CASE("cluster keeps the multiplicity of a degenerate windowed eigenvalue") {
  const auto p = pr::ProblemSpec::synthetic_dense({-2, 1, 1, 4, 7}, 19);
  const auto fm = pr::assemble(p, 5);
  const auto q = exact_projection(p, fm, 0.0, 2.0);
  const auto s = di::dissipative_spectrum(fm, q);
  const auto report = di::cluster(s, {1.0}, di::default_cluster_radius({1.0}), 0.5);
  CHECK(report.clusters[0].multiplicity == 2);
}

TEST_CASE("cluster separates unassigned and unexpected non-real values") {
  ga::Spectrum s;
  s.hermitian = false;
  s.pairs.values = Vector(3);
  s.pairs.values(0) = Complex(0.0, 0.01);   // echo
  s.pairs.values(1) = Complex(5.0, 0.9);    // far from the target: unexpected
  s.pairs.values(2) = Complex(1.02, 0.98);  // cluster member
  s.pairs.vectors = Matrix::Identity(3, 3);
  s.pairs.residual_norms = RealVector::Zero(3);
  const auto report = di::cluster(s, {1.0}, 0.3, 0.5);
  CHECK(report.clusters[0].multiplicity == 1);
  REQUIRE(report.unassigned.size() == 2);
  REQUIRE(report.unexpected_nonreal.size() == 1);
  CHECK(report.unexpected_nonreal[0] == 1);
  REQUIRE(report.suspected_echoes.size() == 1);
  CHECK(report.suspected_echoes[0] == 0);
}

TEST_CASE("cluster rejects overlapping target disks") {
  ga::Spectrum s;
  s.hermitian = false;
  s.pairs.values = Vector(1);
  s.pairs.values(0) = Complex(0, 1);
  s.pairs.vectors = Matrix::Identity(1, 1);
  s.pairs.residual_norms = RealVector::Zero(1);
  CHECK_THROWS_AS(di::cluster(s, {0.0, 0.5}, 0.3, 0.5), Error);
}

TEST_CASE("default cluster radius halves the minimal target separation") {
  CHECK(di::default_cluster_radius({}) == doctest::Approx(0.45));
  CHECK(di::default_cluster_radius({3.0}) == doctest::Approx(0.45));
  CHECK(di::default_cluster_radius({0.0, 0.5}) == doctest::Approx(0.25));
}

TEST_CASE("localize: enclosure radius and endpoint behaviour") {
  const auto exact = di::localize(Complex(2.5, 1.0));
  CHECK(exact.lo == doctest::Approx(2.5));
  CHECK(exact.hi == doctest::Approx(2.5));
  const auto half = di::localize(Complex(2.5, 0.5));
  CHECK(half.lo == doctest::Approx(2.0));
  CHECK(half.hi == doctest::Approx(3.0));
  const auto zero = di::localize(Complex(2.5, 0.0));
  CHECK(zero.radius() == doctest::Approx(0.0));
  CHECK_THROWS_AS(di::localize(Complex(0.0, 1.5)), Error);
  CHECK_THROWS_AS(di::localize(Complex(0.0, -0.5)), Error);
}

TEST_CASE("localize: int3 refinement inside a declared window") {
  // s = 0.9 * 0.1 = 0.09; interval (0.3 - 0.09/0.7, 0.3 + 0.09/0.3)
  const auto refined = di::localize(Complex(0.3, 0.9), std::make_pair(0.0, 1.0));
  CHECK(refined.lo == doctest::Approx(0.3 - 0.09 / 0.7).epsilon(1e-14));
  CHECK(refined.hi == doctest::Approx(0.6).epsilon(1e-14));
  // cross-check by an independent scalar path
  const double s = 0.9 * (1.0 - 0.9);
  CHECK(refined.lo == doctest::Approx(0.3 - s / (1.0 - 0.3)).epsilon(1e-14));

  // Refinement not contained in the window falls back to the unrefined interval.
  const auto fallback = di::localize(Complex(0.3, 0.5), std::make_pair(0.0, 1.0));
  CHECK(fallback.radius() == doctest::Approx(0.5));
  // Re z outside the window falls back as well.
  const auto outside = di::localize(Complex(1.5, 0.9), std::make_pair(0.0, 1.0));
  CHECK(outside.radius() == doctest::Approx(std::sqrt(0.09)));
}

TEST_CASE("pollution_report: constructed coarse space with genuine pollution") {
  // One true eigenvalue (2.0) inside the window, a coarse trial space that is
  // exact on its eigenvector but produces two extra Ritz values in the window.
  const auto p = pr::ProblemSpec::synthetic_dense({-4, -3.4, 1.1, 2, 2.9, 3.3, 8, 9, 10.5, 12}, 23);
  const auto fm = pr::assemble(p, 10);
  const Matrix basis = pr::synthetic_eigenbasis(p);

  Matrix trial(10, 3);
  trial.col(0) = basis.col(3);  // exact eigenvector of 2.0
  // Mixtures of out-of-window eigenvectors whose Rayleigh quotients land
  // inside the window: pollution by construction. Weights alpha^2 lam_a +
  // beta^2 lam_b hit 2.5 and 2.9; the mixes stay mutually orthogonal, so the
  // compressed pencil is exactly diag(2, 2.5, 2.9).
  const double a1 = std::sqrt(5.5 / 6.9), b1 = std::sqrt(1.0 - 5.5 / 6.9);
  const double a2 = std::sqrt(7.6 / 13.9), b2 = std::sqrt(1.0 - 7.6 / 13.9);
  trial.col(1) = a1 * basis.col(2) + b1 * basis.col(6);   // mixes 1.1 and 8
  trial.col(2) = a2 * basis.col(1) + b2 * basis.col(8);   // mixes -3.4 and 10.5
  const Matrix tc = trial.adjoint() * fm.t_hat * trial;
  const Matrix mc = trial.adjoint() * fm.mass * trial;
  const auto coarse_pairs = linalg::hermitian_generalized_eig(
      ((tc + tc.adjoint()) / 2.0).eval(), ((mc + mc.adjoint()) / 2.0).eval());

  std::vector<double> in_window;
  std::vector<Index> selected;
  for (Index i = 0; i < 3; ++i) {
    const double v = coarse_pairs.values(i).real();
    if (v >= 1.5 && v <= 3.2) {
      in_window.push_back(v);
      selected.push_back(i);
    }
  }
  REQUIRE(in_window.size() == 3);  // one genuine + two pollution

  Matrix coarse_vectors(10, 3);
  for (size_t j = 0; j < selected.size(); ++j)
    coarse_vectors.col(Index(j)) = trial * coarse_pairs.vectors.col(selected[j]);
  const auto q = di::build_projection(coarse_vectors, identity_nesting(10), fm);
  const auto s = di::dissipative_spectrum(fm, q);
  const auto report = di::cluster(s, {2.0}, 0.45, 0.5);
  const auto verdicts = di::pollution_report(in_window, report);

  REQUIRE(verdicts.size() == 3);
  int genuine = 0, polluted = 0;
  for (const auto& v : verdicts) (v.genuine ? genuine : polluted)++;
  CHECK(genuine == 1);
  CHECK(polluted == 2);
  for (const auto& v : verdicts)
    if (v.genuine) CHECK(std::abs(v.value - 2.0) < 1e-9);
}

TEST_CASE("pollution_report on an empty window is empty") {
  ga::Spectrum s;
  s.hermitian = false;
  s.pairs.values = Vector(0);
  s.pairs.vectors = Matrix(0, 0);
  s.pairs.residual_norms = RealVector(0);
  const auto report = di::cluster(s, {}, 0.45, 0.5);
  CHECK(di::pollution_report({}, report).empty());
}

TEST_CASE("the enclosure bound holds for every non-real eigenvalue under perturbed projections") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> lam = {-3, -1.2, 0.4, 1.0, 2.2, 4.0, 5.5, 8.0};
    const auto p = pr::ProblemSpec::synthetic_dense(lam, 100 + seed);
    const auto fm = pr::assemble(p, 8);
    const Matrix basis = pr::synthetic_eigenbasis(p);
    Matrix cols(8, 2);
    cols.col(0) = basis.col(3);
    cols.col(1) = basis.col(4);
    cols += 0.15 * tt::random_complex(8, 2, 500 + seed);
    const auto q = di::build_projection(cols, identity_nesting(8), fm);
    const auto s = di::dissipative_spectrum(fm, q);
    for (Index i = 0; i < s.pairs.size(); ++i) {
      const Complex z = s.pairs.values(i);
      if (std::abs(z.imag()) < 1e-12) continue;
      double dist = 1e300;
      for (double l : lam) dist = std::min(dist, std::abs(z.real() - l));
      const double im = std::min(std::max(z.imag(), 0.0), 1.0);
      CHECK(dist <= std::sqrt(im * (1.0 - im)) + 1e-8);
    }
  }
}

TEST_CASE("multiplicity capture with an inexact projection (defect below 1/sqrt(2))") {
  int captured = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = pr::ProblemSpec::synthetic_dense({-2, 1, 1, 4, 6, 8.5, 11, 13}, 300 + seed);
    const auto fm = pr::assemble(p, 8);
    const Matrix basis = pr::synthetic_eigenbasis(p);
    Matrix cols = basis.middleCols(1, 2);  // the two eigenvectors of 1
    cols += 0.10 * tt::random_complex(8, 2, 700 + seed);
    const auto q = di::build_projection(cols, identity_nesting(8), fm);
    const double eps = analysis::projection_defect(q, basis.middleCols(1, 2), fm.mass);
    REQUIRE(eps < 1.0 / std::sqrt(2.0));
    const auto s = di::dissipative_spectrum(fm, q);
    const auto report = di::cluster(s, {1.0}, di::default_cluster_radius({1.0}), 0.5);
    if (report.clusters[0].multiplicity == 2) ++captured;
  }
  CHECK(captured == 5);
}

TEST_CASE("cluster means super-converge as the square of the eigenvector gap") {
  // T + iQ diagonal with eigenvalue mu = 2 + i; trial spaces contain a rotated
  // copy of the eigenvector plus a fixed complement.
  const Index n = 8;
  Matrix a = Matrix::Zero(n, n);
  const double diag[] = {0, 1, 2, 3.5, 5, 6.5, 8, 9};
  for (Index i = 0; i < n; ++i) a(i, i) = diag[i];
  a(2, 2) += Complex(0, 1);
  const Complex mu(2, 1);

  Matrix w = Matrix::Zero(n, 5);  // fixed complement: e0, e1, e3, e4, e6
  w(0, 0) = w(1, 1) = w(3, 2) = w(4, 3) = w(6, 4) = 1.0;

  std::vector<std::pair<double, double>> gap_err;
  for (int k = 0; k < 7; ++k) {
    const double theta = 0.3 * std::pow(0.5, k);
    Matrix b(n, 6);
    Vector v = Vector::Zero(n);
    v(2) = std::cos(theta);
    v(5) = std::sin(theta);
    b.col(0) = v;
    b.rightCols(5) = w;

    const Matrix ab = b.adjoint() * a * b;
    const Matrix mb = b.adjoint() * b;
    const auto pairs = linalg::general_pencil_eig(ab, ((mb + mb.adjoint()) / 2.0).eval());
    double err = 1e300;
    for (Index i = 0; i < pairs.size(); ++i)
      err = std::min(err, std::abs(pairs.values(i) - mu));

    Vector e2 = Vector::Zero(n);
    e2(2) = 1.0;
    const Matrix span = linalg::orthonormalize_in(b, Matrix::Identity(n, n));
    const double gap = (e2 - span * (span.adjoint() * e2)).norm();
    gap_err.push_back({gap, err});
  }
  const auto fit = analysis::fit_rate(gap_err);
  CHECK(fit.slope >= 1.8);  // quadratic in the gap
}

}  // TEST_SUITE
