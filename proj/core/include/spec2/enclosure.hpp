// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spec2/galerkin.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
};

/// [Re z - |Im z|, Re z + |Im z|]; meets the spectrum of a self-adjoint A for
/// every second-order point z.
Interval basic_interval(Complex z);

/// [Re z - |Im z|^2 / (b - Re z), Re z + |Im z|^2 / (Re z - a)]. Throws
/// OutOfDisc unless z lies in the open disc with diameter [a, b].
Interval sharpened_interval(Complex z, double a, double b);

/// Closed disc around z of radius gamma, which meets the spectrum of a normal A.
struct DiscCertificate {
  Complex center;
  double radius = 0.0;

  bool contains(Complex w, double tol = 0.0) const { return std::abs(w - center) <= radius + tol; }
};

DiscCertificate residual_enclosure(Complex z, double gamma);

/// Window (a, b) around the known spectrum point nearest to Re z: midpoints to
/// the neighbouring real spectrum points, mirrored at the ends. Empty when the
/// real spectrum has fewer than two points.
std::optional<std::pair<double, double>> auto_window(const SpectralData& spectrum, Complex z);

struct EnclosureReport {
  Complex z;
  Interval basic;
  std::optional<Interval> sharpened;
  std::optional<std::pair<double, double>> window;
  std::optional<double> gamma;
  std::optional<double> cluster_radius;  // r used when gamma was computed over a cluster
  std::string verdict;
};

/// Collects every certificate that applies. Intervals are produced for
/// self-adjoint models only; the residual disc needs gamma.
EnclosureReport enclose(Complex z, bool self_adjoint, std::optional<std::pair<double, double>> window,
                        std::optional<double> gamma);

struct TrackedPoint {
  Complex z;
  double gamma = 0.0;
};

struct LimitPoint {
  Complex z;
  double gamma = 0.0;
  std::size_t chain_length = 0;
};

/// Points that persist through every level of a sweep: a chain starts at a
/// point of the first level and extends to the nearest unclaimed point of the
/// next level within max(10 gamma, 1e-6), provided that point's gamma does
/// not exceed the level's threshold. Surviving chain ends are deduplicated to
/// 1e-8 and sorted by (re, im).
std::vector<LimitPoint> filtered_limit_points(const std::vector<std::vector<TrackedPoint>>& levels,
                                              const std::vector<double>& gamma_thresholds);

}  // namespace spec2
