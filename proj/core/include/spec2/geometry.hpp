// SPDX-License-Identifier: Apache-2.0
//
// The pollution region Q(S) = { z : 0 in conv{(l - z)(conj(l) - z) : l in S} }
// for a finite sample S, its boundary arcs and distance queries.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "spec2/linalg.hpp"

namespace spec2 {

/// Finite sample of a compact set, deduplicated to 1e-14 (relative to max(1, |l|)).
class SpectralSample {
 public:
  /// Throws InvalidArgument when empty or non-finite.
  explicit SpectralSample(std::vector<Complex> points);
  /// Also records closed real intervals [a, b] known to lie in the set.
  SpectralSample(std::vector<Complex> points, std::vector<std::pair<double, double>> real_intervals);

  const std::vector<Complex>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<std::pair<double, double>>& real_intervals() const { return intervals_; }

  /// The points, followed by the point of each real interval nearest to re(z)
  /// when it is not already a sample point.
  std::vector<Complex> points_near(Complex z) const;

 private:
  std::vector<Complex> points_;
  std::vector<std::pair<double, double>> intervals_;
};

/// (l - z)(conj(l) - z) for every sample point, in sample order.
std::vector<Complex> sigma_z(const SpectralSample& sample, Complex z);

struct HullCertificate {
  std::array<std::size_t, 3> indices{};  // sample indices (repeated for lower-dimensional hulls)
  std::array<double, 3> weights{};       // convex weights, sum 1
  double t_hat = 0.0;                    // weights = (t, (1 - t) s, (1 - t)(1 - s))
  double s_hat = 0.0;
};

struct QMembership {
  bool inside = false;
  std::optional<std::array<Complex, 3>> witness_triple;  // sorted by real part
  std::optional<HullCertificate> hull_certificate;
};

/// Origin-in-hull test on sigma_z with orientation tolerance 1e-12 relative to
/// max |p|^2; the closed hull counts as inside.
QMembership membership(const SpectralSample& sample, Complex z);

enum class ArcSign { plus, minus };
enum class ArcKind { segment, circle };

/// gamma(l1, l2)(t) = m(t) +- i h(t), the roots of
/// t (|l1|^2 - 2 z Re l1 + z^2) + (1 - t)(|l2|^2 - 2 z Re l2 + z^2) = 0 with
/// m(t) = t Re l1 + (1 - t) Re l2. t = 1 gives the l1 endpoint.
struct GammaArc {
  Complex lambda1;
  Complex lambda2;
  ArcSign sign = ArcSign::plus;
  ArcKind kind = ArcKind::segment;
  double center = 0.0;  // circle center on the real axis (circle kind)
  double radius = 0.0;  // circle radius (circle kind)

  Complex point(double t) const;
  /// k >= 2 points from t = 1 down to t = 0.
  std::vector<Complex> sample(std::size_t k) const;
};

GammaArc gamma_arc(Complex lambda1, Complex lambda2, ArcSign sign);

/// Closed polyline gamma(l1,l2), gamma(l2,l3), gamma(l3,l1) after sorting the
/// triple by real part; k points per arc, joints not repeated. Throws
/// DegenerateTriple when the three points coincide.
std::vector<Complex> q_region_boundary(Complex lambda1, Complex lambda2, Complex lambda3, ArcSign sign,
                                       std::size_t k = 256);

/// Signed margin of z against the closed region bounded by the three arcs of
/// a triple (either sign): positive inside, negative outside, measured as the
/// smallest horizontal or vertical clearance to the region's boundary.
double triple_region_margin(Complex lambda1, Complex lambda2, Complex lambda3, Complex z);

struct TripleMembership {
  bool inside = false;
  double margin = 0.0;  // largest triple margin
  std::array<Complex, 3> best_triple{};
};

/// Membership through the union of triple regions over all triples drawn with
/// repetition from the sample.
TripleMembership triple_membership(const SpectralSample& sample, Complex z);

enum class FattenMode {
  filled,    // circle samples, plus the real chord of every disk that crosses the real axis
  boundary,  // circle samples only
};

/// Each point plus disk_samples points on the circle of radius epsilon around
/// it. Q(S) meets the real line only in S, so circle samples alone leave the
/// real points inside a disk (and a thin band around them) outside Q; the
/// filled mode adds disk_samples interior points of the real chord as well and
/// records the chord as a real interval, which membership samples at re(z).
SpectralSample fatten(const SpectralSample& sample, double epsilon, std::size_t disk_samples = 64,
                      FattenMode mode = FattenMode::filled);

struct DistanceBracket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t disk_samples = 0;
  /// Polygon-versus-disk discretization allowance 2 * hi / disk_samples.
  double discretization_band() const;
};

/// Bisection on epsilon over membership(fatten(sample, epsilon), z) until the
/// bracket width is at most 1e-6 (1 + |z|). Returns {0, 0} when z is in Q.
DistanceBracket dist_to_Q(const SpectralSample& sample, Complex z, std::size_t disk_samples = 64);

}  // namespace spec2
