#include "specgal/dissipative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specgal::dissipative {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

void sort_by_value(linalg::EigenPairs& p) {
  const Index n = p.values.size();
  std::vector<Index> perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  std::stable_sort(perm.begin(), perm.end(), [&](Index i, Index j) {
    if (p.values(i).real() != p.values(j).real()) return p.values(i).real() < p.values(j).real();
    return p.values(i).imag() < p.values(j).imag();
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

}  // namespace

ProjectionQ build_projection(const Matrix& coarse_vectors, const problems::NestedSpaces& nesting,
                             const problems::FormMatrices& fine) {
  if (coarse_vectors.cols() > 0 && coarse_vectors.rows() != nesting.coarse_dim)
    throw Error(Errc::dimension_mismatch, "build_projection: coarse vector length != coarse_dim");
  if (fine.dim != nesting.fine_dim)
    throw Error(Errc::dimension_mismatch, "build_projection: fine space does not match nesting");

  ProjectionQ q;
  q.rank = coarse_vectors.cols();
  if (q.rank == 0) {
    q.coeffs = Matrix::Zero(fine.dim, 0);
    q.gram_block = Matrix::Zero(fine.dim, fine.dim);
    return q;
  }
  const Matrix embedded = nesting.embedding * coarse_vectors;
  q.coeffs = linalg::orthonormalize_in(embedded, fine.mass);
  const Matrix w = fine.mass * q.coeffs;
  q.gram_block = hermitian_part(w * w.adjoint());
  return q;
}

galerkin::Spectrum dissipative_spectrum(const problems::FormMatrices& fine, const ProjectionQ& q) {
  if (q.gram_block.rows() != fine.dim)
    throw Error(Errc::dimension_mismatch, "dissipative_spectrum: Q does not match the fine space");
  galerkin::Spectrum s;
  s.pairs = linalg::general_pencil_eig(fine.t_hat + kI * q.gram_block, fine.mass);
  s.space_id = fine.space_id + "+iQ";
  s.hermitian = false;
  return s;
}

galerkin::Spectrum inverse_dissipative_spectrum(const problems::FormMatrices& fine,
                                                const ProjectionQ& q, double gamma) {
  if (q.rank > 0 && q.coeffs.rows() != fine.dim)
    throw Error(Errc::dimension_mismatch, "inverse_dissipative_spectrum: Q does not match the fine space");

  const Matrix a1 = hermitian_part(fine.t_hat - gamma * fine.mass);
  try {
    linalg::cholesky_factor(a1);
  } catch (const Error& e) {
    if (e.code() == Errc::not_positive_definite)
      throw Error(Errc::not_positive_definite,
                  "inverse mode: T-hat - gamma*M is not positive-definite for gamma=" +
                      std::to_string(gamma) + " (" + e.what() + ")",
                  e.index());
    throw;
  }

  Matrix r = Matrix::Zero(fine.dim, fine.dim);
  if (q.rank > 0) {
    const Matrix c = linalg::orthonormalize_in(q.coeffs, a1);  // d_j = 1 afterwards
    const Matrix v = a1 * c;
    r = hermitian_part(v * v.adjoint());
  }

  // Solve (M + iR) x = w A1 x; the z of the form A1 x = z (M + iR) x are
  // the reciprocals. Whitening by A1 realizes the hat-space problem, so the
  // w-values land in the numerical range of G-hat + i Q-hat.
  galerkin::Spectrum s;
  s.pairs = linalg::general_pencil_eig(fine.mass + kI * r, a1);
  for (Index i = 0; i < s.pairs.size(); ++i) s.pairs.values(i) = 1.0 / s.pairs.values(i);
  sort_by_value(s.pairs);
  s.space_id = fine.space_id + ":inverse+iQ";
  s.hermitian = false;
  return s;
}

double default_cluster_radius(const std::vector<double>& targets) {
  double r = 0.45;
  // Strictly below half the separation so the target circles stay disjoint.
  for (size_t i = 0; i < targets.size(); ++i)
    for (size_t j = i + 1; j < targets.size(); ++j)
      r = std::min(r, std::abs(targets[i] - targets[j]) * 0.5 * (1.0 - 1e-9));
  return r;
}

ClusterReport cluster(const galerkin::Spectrum& spec, const std::vector<double>& targets,
                      double radius, double im_threshold) {
  if (!(radius > 0)) throw Error(Errc::invalid_argument, "cluster: radius must be positive");
  for (size_t i = 0; i < targets.size(); ++i)
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (std::abs(targets[i] - targets[j]) <= 2.0 * radius)
        throw Error(Errc::invalid_argument, "cluster: target disks overlap (separation <= 2*radius)");

  ClusterReport report;
  report.radius = radius;
  report.im_threshold = im_threshold;
  report.clusters.resize(targets.size());
  for (size_t t = 0; t < targets.size(); ++t) report.clusters[t].target = targets[t];

  for (Index i = 0; i < spec.pairs.size(); ++i) {
    const Complex z = spec.pairs.values(i);
    if (z.imag() >= im_threshold) {
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (size_t t = 0; t < targets.size(); ++t) {
        const double d = std::abs(z - Complex(targets[t], 1.0));
        if (d < best_dist) {
          best_dist = d;
          best = int(t);
        }
      }
      if (best >= 0 && best_dist <= radius) {
        report.clusters[best].members.push_back(i);
        continue;
      }
      report.unassigned.push_back(i);
      report.unexpected_nonreal.push_back(i);
      continue;
    }
    report.unassigned.push_back(i);
    if (z.imag() > 1e-12) report.suspected_echoes.push_back(i);
  }

  for (auto& c : report.clusters) {
    c.multiplicity = int(c.members.size());
    if (c.members.empty()) continue;
    Complex sum = 0;
    Index best = c.members.front();
    for (Index i : c.members) {
      sum += spec.pairs.values(i);
      if (spec.pairs.values(i).imag() > spec.pairs.values(best).imag()) best = i;
    }
    c.mean = sum / double(c.members.size());
    c.best_member = best;
    c.localization = localize(spec.pairs.values(best));
  }
  return report;
}

Interval localize(Complex z, std::optional<std::pair<double, double>> window) {
  constexpr double tol = 1e-8;
  const double im = z.imag();
  if (im < -tol || im > 1.0 + tol)
    throw Error(Errc::invalid_argument,
                "localize: Im z must lie in [0, 1] (numerical range of T + iQ)");
  const double s = std::max(0.0, std::min(im, 1.0) * (1.0 - std::min(im, 1.0)));
  const double re = z.real();
  const double r = std::sqrt(s);
  Interval enclosure{re - r, re + r};
  if (window) {
    const auto [a, b] = *window;
    if (a < re && re < b) {
      const Interval refined{re - s / (b - re), re + s / (re - a)};
      if (a < refined.lo && refined.hi < b) return refined;
    }
  }
  return enclosure;
}

std::vector<PollutionVerdict> pollution_report(const std::vector<double>& stage_one_in_window,
                                               const ClusterReport& report) {
  std::vector<PollutionVerdict> out;
  out.reserve(stage_one_in_window.size());
  for (double v : stage_one_in_window) {
    PollutionVerdict verdict;
    verdict.value = v;
    for (const auto& c : report.clusters) {
      if (c.multiplicity == 0 || !c.localization) continue;
      // Zero-width intervals (Im z = 1) still match to eigensolver rounding.
      const double floor = 1e-9 * (1.0 + std::abs(c.localization->center()));
      if (c.localization->contains(v) ||
          std::abs(v - c.localization->center()) <= floor) {
        verdict.genuine = true;
        verdict.estimate = c.localization->center();
        verdict.interval = c.localization;
        break;
      }
    }
    out.push_back(verdict);
  }
  return out;
}

}  // namespace specgal::dissipative
