#include "specgal/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specgal::pipeline {

namespace {

std::vector<double> stage_one_values_in_window(const galerkin::Spectrum& s, double a, double b) {
  std::vector<double> out;
  for (Index i = 0; i < s.pairs.size(); ++i) {
    const double v = s.pairs.values(i).real();
    if (v >= a && v <= b) out.push_back(v);
  }
  return out;
}

}  // namespace

double RunPoint::stage_two_distance(double target) const {
  const Complex lifted(target, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < stage_two.pairs.size(); ++i)
    best = std::min(best, std::abs(stage_two.pairs.values(i) - lifted));
  return best;
}

double RunPoint::fine_stage_one_distance(double target) const {
  if (!fine_stage_one)
    throw Error(Errc::invalid_argument, "fine stage-one spectrum was not computed");
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < fine_stage_one->pairs.size(); ++i)
    best = std::min(best, std::abs(fine_stage_one->pairs.values(i).real() - target));
  return best;
}

std::vector<double> window_targets(const problems::ProblemSpec& problem,
                                   const galerkin::SpectralWindow& window, Mode mode) {
  const auto ref = problems::reference_spectrum(problem);
  std::vector<double> targets;
  for (const auto& [value, mult] : ref.eigenvalues) {
    double v = value;
    if (mode == Mode::inverse) {
      const double gamma = window.gamma.value_or(0.0);
      if (value - gamma <= 0) continue;
      v = 1.0 / (value - gamma);
    }
    if (v >= window.a && v <= window.b) targets.push_back(v);
  }
  std::sort(targets.begin(), targets.end());
  return targets;
}

RunPoint run_two_stage(const problems::ProblemSpec& problem, const galerkin::SpectralWindow& window,
                       int coarse_level, int fine_level, Mode mode, const RunOptions& options) {
  if (mode == Mode::inverse && !window.gamma)
    throw Error(Errc::config_error, "inverse mode requires the window's gamma shift");
  if (!(window.a < window.b))
    throw Error(Errc::invalid_argument, "window requires a < b");

  RunPoint point;
  point.coarse_level = coarse_level;
  point.fine_level = fine_level;

  const auto coarse = problems::assemble(problem, coarse_level);
  const auto fine = problems::assemble(problem, fine_level);
  const auto nesting = problems::embed(problem, coarse_level, fine_level);
  point.coarse_dim = coarse.dim;
  point.fine_dim = fine.dim;

  // Stage one on the coarse space; window coordinates for inverse mode are
  // w = 1/(mu - gamma), and to_resolvent enforces gamma < min mu.
  const auto mu_spectrum = galerkin::spectrum_of_t(coarse);
  point.stage_one = (mode == Mode::inverse) ? galerkin::to_resolvent(mu_spectrum, *window.gamma)
                                            : mu_spectrum;

  const auto selection = galerkin::select_window(point.stage_one, window, coarse.mass);
  point.selected = selection.indices;

  const auto q = dissipative::build_projection(selection.vectors, nesting, fine);
  point.q_rank = q.rank;

  if (options.fine_stage_one) {
    const auto fine_mu = galerkin::spectrum_of_t(fine);
    point.fine_stage_one = (mode == Mode::inverse)
                               ? galerkin::to_resolvent(fine_mu, *window.gamma)
                               : fine_mu;
  }

  if (mode == Mode::inverse) {
    // Stage two reported as w = 1/z of the resolvent-pencil values.
    auto z_spec = dissipative::inverse_dissipative_spectrum(fine, q, *window.gamma);
    galerkin::Spectrum w_spec;
    w_spec.hermitian = false;
    w_spec.space_id = z_spec.space_id + ":w";
    w_spec.pairs = z_spec.pairs;
    for (Index i = 0; i < w_spec.pairs.size(); ++i)
      w_spec.pairs.values(i) = 1.0 / w_spec.pairs.values(i);
    // Deterministic order in the reported plane.
    std::vector<Index> perm(w_spec.pairs.size());
    for (Index i = 0; i < w_spec.pairs.size(); ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(), [&](Index i, Index j) {
      const Complex x = w_spec.pairs.values(i), y = w_spec.pairs.values(j);
      if (x.real() != y.real()) return x.real() < y.real();
      return x.imag() < y.imag();
    });
    galerkin::Spectrum sorted = w_spec;
    for (Index i = 0; i < w_spec.pairs.size(); ++i) {
      sorted.pairs.values(i) = w_spec.pairs.values(perm[i]);
      sorted.pairs.vectors.col(i) = w_spec.pairs.vectors.col(perm[i]);
      sorted.pairs.residual_norms(i) = w_spec.pairs.residual_norms(perm[i]);
    }
    point.stage_two = std::move(sorted);
  } else {
    point.stage_two = dissipative::dissipative_spectrum(fine, q);
  }

  point.targets = options.targets.empty() ? window_targets(problem, window, mode) : options.targets;
  const double radius = options.cluster_radius.value_or(
      dissipative::default_cluster_radius(point.targets));
  point.clusters = dissipative::cluster(point.stage_two, point.targets, radius,
                                        options.im_threshold);
  point.pollution = dissipative::pollution_report(
      stage_one_values_in_window(point.stage_one, window.a, window.b), point.clusters);
  return point;
}

}  // namespace specgal::pipeline
