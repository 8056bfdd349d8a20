#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specgal/analysis.hpp"
#include "specgal/dissipative.hpp"

namespace specgal::pipeline {

enum class Mode { direct, inverse };

struct RunOptions {
  std::optional<double> cluster_radius;  // default: dissipative::default_cluster_radius
  double im_threshold = 0.5;
  std::vector<double> targets;           // override; empty -> reference spectrum in the window
  bool fine_stage_one = true;            // also solve the plain Galerkin problem on the fine space
};

// One two-stage run. All spectra are reported in window coordinates: the
// z-plane of T+iQ for direct mode, the resolvent plane w = 1/(mu - gamma)
// (with stage two as w = 1/z of the resolvent pencil) for inverse mode.
struct RunPoint {
  int coarse_level = 0;
  int fine_level = 0;
  Index coarse_dim = 0;
  Index fine_dim = 0;
  Index q_rank = 0;
  std::vector<double> targets;
  galerkin::Spectrum stage_one;                     // coarse, window coordinates
  std::vector<Index> selected;                      // window selection into stage_one
  std::optional<galerkin::Spectrum> fine_stage_one; // plain Galerkin on the fine space
  galerkin::Spectrum stage_two;
  dissipative::ClusterReport clusters;
  std::vector<dissipative::PollutionVerdict> pollution;

  // min over stage-two values of |z - (target + i)|.
  double stage_two_distance(double target) const;
  // min over fine stage-one values of |mu - target| (requires fine_stage_one).
  double fine_stage_one_distance(double target) const;
};

RunPoint run_two_stage(const problems::ProblemSpec& problem, const galerkin::SpectralWindow& window,
                       int coarse_level, int fine_level, Mode mode, const RunOptions& options = {});

// Reference eigenvalues mapped into window coordinates and clipped to [a, b].
std::vector<double> window_targets(const problems::ProblemSpec& problem,
                                   const galerkin::SpectralWindow& window, Mode mode);

}  // namespace specgal::pipeline
