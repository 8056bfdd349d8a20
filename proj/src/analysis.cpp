#include "specgal/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace specgal::analysis {

double subspace_gap(const Matrix& u, const Matrix& v, const Matrix& inner) {
  if (u.cols() == 0) return 0.0;
  if (v.cols() == 0) return 1.0;
  const Matrix uo = linalg::orthonormalize_in(u, inner);
  const Matrix vo = linalg::orthonormalize_in(v, inner);
  if (u.cols() > v.cols()) return 1.0;
  const Matrix k = vo.adjoint() * inner * uo;  // cos of principal angles
  const double cmin = std::min(1.0, linalg::smallest_singular_value(k));
  return std::sqrt(std::max(0.0, 1.0 - cmin * cmin));
}

double subspace_gap_symmetric(const Matrix& u, const Matrix& v, const Matrix& inner) {
  return std::max(subspace_gap(u, v, inner), subspace_gap(v, u, inner));
}

double projection_defect(const dissipative::ProjectionQ& q, const Matrix& exact_basis,
                         const Matrix& mass) {
  const Matrix psi = linalg::orthonormalize_in(exact_basis, mass);
  Matrix defect = psi;
  if (q.rank > 0) defect -= q.coeffs * (q.coeffs.adjoint() * mass * psi);
  const Matrix l = linalg::cholesky_factor(mass);
  return linalg::largest_singular_value(l.adjoint() * defect);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& level_error) {
  if (level_error.size() < 4)
    throw Error(Errc::invalid_argument, "fit_rate: need at least 4 data points");
  RateFit fit;
  fit.levels = level_error;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(level_error.size());
  for (const auto& [level, err] : level_error) {
    if (!(level > 0) || !(err > 0))
      throw Error(Errc::invalid_argument, "fit_rate: levels and errors must be positive");
    const double x = std::log(level), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw Error(Errc::invalid_argument, "fit_rate: degenerate levels");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (const auto& [level, err] : level_error) {
    const double y = std::log(err);
    const double yhat = fit.intercept + fit.slope * std::log(level);
    ss_res += (y - yhat) * (y - yhat);
    ss_tot += (y - ymean) * (y - ymean);
  }
  fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

Matrix t_inner(const problems::FormMatrices& fm, double spectral_min) {
  return fm.t_hat - (spectral_min - 1.0) * fm.mass;
}

}  // namespace specgal::analysis
