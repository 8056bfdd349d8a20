#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specgal/galerkin.hpp"

namespace specgal::dissipative {

// Orthogonal projection Q onto the span of fine-space vectors.
// G(i,j) = <Q phi_j, phi_i> = sum_k (M c_k)_i conj((M c_k)_j).
struct ProjectionQ {
  Matrix coeffs;      // columns c_k, mass-orthonormal
  Matrix gram_block;  // assembled G
  Index rank = 0;
};

struct Interval {
  double lo = 0;
  double hi = 0;
  double center() const { return (lo + hi) / 2.0; }
  double radius() const { return (hi - lo) / 2.0; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct Cluster {
  double target = 0;  // real eigenvalue estimate; the lifted target is target + i
  std::vector<Index> members;
  int multiplicity = 0;
  std::optional<Complex> mean;            // arithmetic mean of the members
  std::optional<Interval> localization;   // enclosure from the best (max-Im) member
  std::optional<Index> best_member;
};

struct ClusterReport {
  std::vector<Cluster> clusters;
  std::vector<Index> unassigned;          // every index not in a cluster
  std::vector<Index> unexpected_nonreal;  // unassigned with Im >= im_threshold off all targets
  std::vector<Index> suspected_echoes;    // unassigned with 0 < Im < im_threshold
  double radius = 0;
  double im_threshold = 0;
};

struct PollutionVerdict {
  double value = 0;  // stage-one eigenvalue
  bool genuine = false;
  std::optional<double> estimate;     // matched cluster's real-part estimate
  std::optional<Interval> interval;   // matched cluster's localization
};

// Embed mass-orthonormal coarse eigenvectors into the fine space and
// re-orthonormalize there (modified Gram-Schmidt in the fine mass inner
// product, one re-orthogonalization pass).
ProjectionQ build_projection(const Matrix& coarse_vectors, const problems::NestedSpaces& nesting,
                             const problems::FormMatrices& fine);

// sigma(T + iQ, L_n): general pencil (T-hat + i G, M).
galerkin::Spectrum dissipative_spectrum(const problems::FormMatrices& fine, const ProjectionQ& q);

// Inverse mode, the pencil A1 x = z (M + i R) x with A1 = T-hat - gamma M and
// R = sum_j v_j v_j^H / d_j, v_j = A1 c_j, d_j = c_j^H A1 c_j. Values are the
// z of that pencil; the reciprocals w = 1/z are the shifted-resolvent
// eigenvalues. The c_j are re-orthonormalized in the A1 inner product first,
// which makes the whitened R an exact orthogonal projection (and is a no-op
// for exactly nested coarse eigenvectors).
galerkin::Spectrum inverse_dissipative_spectrum(const problems::FormMatrices& fine,
                                                const ProjectionQ& q, double gamma);

// Half the minimal pairwise target distance, capped at 0.45.
double default_cluster_radius(const std::vector<double>& targets);

// Assign eigenvalues with Im >= im_threshold to the nearest lifted target
// (target + i) within `radius`. Targets must be separated by more than 2*radius.
ClusterReport cluster(const galerkin::Spectrum& spec, const std::vector<double>& targets,
                      double radius, double im_threshold);

// Enclosure [Re z - r, Re z + r], r = sqrt(Im z (1 - Im z)); when a window
// (a, b) known to contain exactly one eigenvalue is declared and the refined
// interval (Re z - s/(b - Re z), Re z + s/(Re z - a)), s = Im z (1 - Im z),
// lies inside (a, b), the refined interval is returned instead.
Interval localize(Complex z, std::optional<std::pair<double, double>> window = std::nullopt);

// Stage-one eigenvalues inside the window, matched against cluster
// localization intervals; matched values are genuine, the rest polluted.
std::vector<PollutionVerdict> pollution_report(const std::vector<double>& stage_one_in_window,
                                               const ClusterReport& report);

}  // namespace specgal::dissipative
