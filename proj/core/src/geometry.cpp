// SPDX-License-Identifier: Apache-2.0

#include "spec2/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "spec2/error.hpp"

namespace spec2 {
namespace {

constexpr double kOrientTol = 1e-12;
constexpr double kDedupTol = 1e-14;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

bool same_point(Complex a, Complex b) { return std::abs(a - b) <= kDedupTol * std::max(1.0, std::abs(a)); }

// Convex hull (counter-clockwise, collinear points dropped) as indices into pts.
std::vector<std::size_t> convex_hull(const std::vector<Complex>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(pts[a], pts[b]); });
  // Near-coincident points (conjugate samples land on the same product up to
  // rounding) give a tiny edge of arbitrary direction that the chain cannot
  // pop, so merge them at a scale-relative tolerance first.
  double scale = 0.0;
  for (Complex p : pts) scale = std::max(scale, std::abs(p));
  const double merge = 64.0 * kDedupTol * scale;
  std::vector<std::size_t> kept;
  kept.reserve(idx.size());
  for (std::size_t i : idx) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend() && pts[i].real() - pts[*it].real() <= merge; ++it) {
      if (std::abs(pts[i] - pts[*it]) <= merge) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(i);
  }
  idx = std::move(kept);
  if (idx.size() < 3) return idx;
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) { return cross(pts[a] - pts[o], pts[b] - pts[o]); };
  for (std::size_t i : idx) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t j = idx.size() - 1; j-- > 0;) {
    const std::size_t i = idx[j];
    while (k >= lower && turn(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

void finish_certificate(const std::vector<Complex>& pts, HullCertificate cert, QMembership& out) {
  // Order the triple by real part so that t_hat weights the leftmost point.
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lex_less(pts[cert.indices[a]], pts[cert.indices[b]]); });
  HullCertificate sorted;
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    sorted.indices[k] = cert.indices[order[k]];
    sorted.weights[k] = std::clamp(cert.weights[order[k]], 0.0, 1.0);
    total += sorted.weights[k];
  }
  for (double& w : sorted.weights) w /= total;
  sorted.t_hat = sorted.weights[0];
  const double rest = 1.0 - sorted.t_hat;
  sorted.s_hat = rest > 0.0 ? std::clamp(sorted.weights[1] / rest, 0.0, 1.0) : 0.0;
  out.inside = true;
  out.witness_triple = std::array<Complex, 3>{pts[sorted.indices[0]], pts[sorted.indices[1]], pts[sorted.indices[2]]};
  out.hull_certificate = sorted;
}

// h(x) of the arc between two points with distinct real parts.
double arc_height(Complex li, Complex lj, double x) {
  const double d = li.real() - lj.real();
  const double t = std::clamp((x - lj.real()) / d, 0.0, 1.0);
  const double h2 = t * (1.0 - t) * d * d + t * li.imag() * li.imag() + (1.0 - t) * lj.imag() * lj.imag();
  return std::sqrt(std::max(0.0, h2));
}

std::array<Complex, 3> sorted_triple(Complex a, Complex b, Complex c) {
  std::array<Complex, 3> t{a, b, c};
  std::sort(t.begin(), t.end(), [](Complex p, Complex q) { return lex_less(p, q); });
  return t;
}

}  // namespace

SpectralSample::SpectralSample(std::vector<Complex> points) {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "spectral sample is empty");
  for (Complex p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::non_finite, "spectral sample has a non-finite point");
    }
  }
  // Sweep in order of real part, keeping the first occurrence of each cluster.
  std::vector<std::size_t> by_re(points.size());
  std::iota(by_re.begin(), by_re.end(), std::size_t{0});
  std::sort(by_re.begin(), by_re.end(), [&](std::size_t a, std::size_t b) {
    return points[a].real() < points[b].real() || (points[a].real() == points[b].real() && a < b);
  });
  std::vector<bool> drop(points.size(), false);
  for (std::size_t a = 0; a < by_re.size(); ++a) {
    const std::size_t i = by_re[a];
    if (drop[i]) continue;
    const double reach = kDedupTol * std::max(1.0, std::abs(points[i])) * 2.0;
    for (std::size_t b = a + 1; b < by_re.size(); ++b) {
      const std::size_t j = by_re[b];
      if (points[j].real() - points[i].real() > reach) break;
      if (!drop[j] && same_point(points[std::min(i, j)], points[std::max(i, j)])) drop[std::max(i, j)] = true;
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!drop[i]) points_.push_back(points[i]);
  }
}

SpectralSample::SpectralSample(std::vector<Complex> points, std::vector<std::pair<double, double>> real_intervals)
    : SpectralSample(std::move(points)) {
  for (const auto& [a, b] : real_intervals) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
      throw Error(ErrorCode::invalid_argument, "real interval needs finite a <= b");
    }
  }
  intervals_ = std::move(real_intervals);
}

std::vector<Complex> SpectralSample::points_near(Complex z) const {
  std::vector<Complex> out = points_;
  for (const auto& [a, b] : intervals_) {
    const Complex x(std::clamp(z.real(), a, b), 0.0);
    if (std::none_of(points_.begin(), points_.end(), [&](Complex p) { return same_point(p, x); })) out.push_back(x);
  }
  return out;
}

std::vector<Complex> sigma_z(const SpectralSample& sample, Complex z) {
  std::vector<Complex> out;
  out.reserve(sample.size());
  for (Complex l : sample.points()) out.push_back((l - z) * (std::conj(l) - z));
  return out;
}

QMembership membership(const SpectralSample& sample, Complex z) {
  const std::vector<Complex> sample_pts = sample.points_near(z);
  std::vector<Complex> pts;
  pts.reserve(sample_pts.size());
  for (Complex l : sample_pts) pts.push_back((l - z) * (std::conj(l) - z));
  QMembership out;
  double scale = 0.0;
  for (Complex p : pts) scale = std::max(scale, std::norm(p));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] == Complex(0.0)) {
      finish_certificate(sample_pts, HullCertificate{{i, i, i}, {1.0, 0.0, 0.0}}, out);
      return out;
    }
  }
  const double tol = kOrientTol * scale;
  const std::vector<std::size_t> hull = convex_hull(pts);

  if (hull.size() == 1) return out;
  if (hull.size() == 2) {
    const Complex a = pts[hull[0]];
    const Complex b = pts[hull[1]];
    if (std::abs(cross(a, b)) <= tol && dot(a, b) <= 0.0) {
      const double wa = std::abs(b) / (std::abs(a) + std::abs(b));
      finish_certificate(sample_pts, HullCertificate{{hull[0], hull[1], hull[1]}, {wa, 1.0 - wa, 0.0}}, out);
    }
    return out;
  }
  // Counter-clockwise polygon: the origin is inside when it is left of (or on) every edge.
  const std::size_t m = hull.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Complex a = pts[hull[i]];
    const Complex b = pts[hull[(i + 1) % m]];
    if (cross(b - a, -a) < -tol) return out;
  }
  // Fan triangulation from hull[0]; keep the triangle with the largest minimum weight.
  const Complex v0 = pts[hull[0]];
  HullCertificate best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const Complex v1 = pts[hull[i]];
    const Complex v2 = pts[hull[i + 1]];
    const double area = cross(v1 - v0, v2 - v0);
    if (area == 0.0) continue;
    // Barycentric coordinates of the origin.
    const double b0 = cross(v1, v2) / area;
    const double b1 = cross(v2, v0) / area;
    const double b2 = cross(v0, v1) / area;
    const double lowest = std::min({b0, b1, b2});
    if (lowest > best_min) {
      best_min = lowest;
      best = HullCertificate{{hull[0], hull[i], hull[i + 1]}, {b0, b1, b2}};
    }
  }
  finish_certificate(sample_pts, best, out);
  return out;
}

Complex GammaArc::point(double t) const {
  const double m = t * lambda1.real() + (1.0 - t) * lambda2.real();
  const double d = lambda1.real() - lambda2.real();
  const double h2 =
      t * (1.0 - t) * d * d + t * lambda1.imag() * lambda1.imag() + (1.0 - t) * lambda2.imag() * lambda2.imag();
  const double h = std::sqrt(std::max(0.0, h2));
  return {m, sign == ArcSign::plus ? h : -h};
}

std::vector<Complex> GammaArc::sample(std::size_t k) const {
  k = std::max<std::size_t>(k, 2);
  std::vector<Complex> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(point(1.0 - static_cast<double>(i) / static_cast<double>(k - 1)));
  return out;
}

GammaArc gamma_arc(Complex lambda1, Complex lambda2, ArcSign sign) {
  GammaArc arc;
  arc.lambda1 = lambda1;
  arc.lambda2 = lambda2;
  arc.sign = sign;
  const double d = lambda1.real() - lambda2.real();
  const double tol = 1e-14 * std::max({1.0, std::abs(lambda1.real()), std::abs(lambda2.real())});
  if (std::abs(d) <= tol) {
    arc.kind = ArcKind::segment;
    return arc;
  }
  arc.kind = ArcKind::circle;
  arc.center = (std::norm(lambda1) - std::norm(lambda2)) / (2.0 * d);
  const double dx = lambda1.real() - arc.center;
  arc.radius = std::sqrt(dx * dx + lambda1.imag() * lambda1.imag());
  return arc;
}

std::vector<Complex> q_region_boundary(Complex lambda1, Complex lambda2, Complex lambda3, ArcSign sign,
                                       std::size_t k) {
  if (same_point(lambda1, lambda2) && same_point(lambda2, lambda3)) {
    throw Error(ErrorCode::degenerate_triple, "all three points coincide");
  }
  const auto t = sorted_triple(lambda1, lambda2, lambda3);
  k = std::max<std::size_t>(k, 2);
  std::vector<Complex> out;
  out.reserve(3 * k);
  auto append = [&](Complex from, Complex to) {
    const auto pts = gamma_arc(from, to, sign).sample(k);
    out.insert(out.end(), pts.begin(), pts.end() - 1);
  };
  append(t[0], t[1]);
  append(t[1], t[2]);
  append(t[2], t[0]);
  return out;
}

double triple_region_margin(Complex lambda1, Complex lambda2, Complex lambda3, Complex z) {
  const auto l = sorted_triple(lambda1, lambda2, lambda3);
  const double a = l[0].real();
  const double b = l[1].real();
  const double c = l[2].real();
  const double x = z.real();
  const double y = std::abs(z.imag());
  const double i1 = std::abs(l[0].imag());
  const double i2 = std::abs(l[1].imag());
  const double i3 = std::abs(l[2].imag());

  if (a == c) {
    // Everything on one vertical line: the region is the segment of heights.
    const double lo = std::min({i1, i2, i3});
    const double hi = std::max({i1, i2, i3});
    return -std::max({std::abs(x - a), lo - y, y - hi, 0.0});
  }
  if (x < a || x > c) return std::min(x - a, c - x);

  const double h13 = arc_height(l[0], l[2], x);
  double mlo = 0.0;
  double mhi = 0.0;
  if (a == b && x == a) {
    mlo = std::min(i1, i2);
    mhi = std::max(i1, i2);
  } else if (b == c && x == c) {
    mlo = std::min(i2, i3);
    mhi = std::max(i2, i3);
  } else if (a < b && x <= b) {
    mlo = mhi = arc_height(l[0], l[1], x);
  } else {
    mlo = mhi = arc_height(l[1], l[2], x);
  }
  const double lo = std::min(h13, mlo);
  const double hi = std::max(h13, mhi);
  return std::min({x - a, c - x, y - lo, hi - y});
}

TripleMembership triple_membership(const SpectralSample& sample, Complex z) {
  const auto& pts = sample.points();
  TripleMembership out;
  out.margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      for (std::size_t k = j; k < pts.size(); ++k) {
        const double m = triple_region_margin(pts[i], pts[j], pts[k], z);
        if (m > out.margin) {
          out.margin = m;
          out.best_triple = sorted_triple(pts[i], pts[j], pts[k]);
        }
      }
    }
  }
  out.inside = out.margin >= 0.0;
  return out;
}

SpectralSample fatten(const SpectralSample& sample, double epsilon, std::size_t disk_samples, FattenMode mode) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::invalid_argument, "fattening radius must be finite and nonnegative");
  }
  if (epsilon == 0.0 || disk_samples == 0) return sample;
  const bool filled = mode == FattenMode::filled;
  std::vector<Complex> centers = sample.points();
  std::vector<Complex> pts;
  std::vector<std::pair<double, double>> chords;
  // An interval's neighbourhood: disks at both ends, the two parallel sides and
  // the widened interval.
  for (const auto& [a, b] : sample.real_intervals()) {
    centers.emplace_back(a, 0.0);
    centers.emplace_back(b, 0.0);
    for (std::size_t k = 1; k <= disk_samples; ++k) {
      const double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(disk_samples + 1);
      pts.emplace_back(x, epsilon);
      pts.emplace_back(x, -epsilon);
    }
    if (filled) chords.emplace_back(a - epsilon, b + epsilon);
  }
  for (Complex l : centers) {
    pts.push_back(l);
    for (std::size_t k = 0; k < disk_samples; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(disk_samples);
      pts.push_back(l + std::polar(epsilon, theta));
    }
    const double lift = std::abs(l.imag());
    if (filled && lift < epsilon) {
      const double half = std::sqrt(epsilon * epsilon - lift * lift);
      for (std::size_t k = 1; k <= disk_samples; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(disk_samples + 1);
        pts.emplace_back(l.real() - half + 2.0 * half * f, 0.0);
      }
      chords.emplace_back(l.real() - half, l.real() + half);
    }
  }
  return SpectralSample(std::move(pts), std::move(chords));
}

double DistanceBracket::discretization_band() const {
  return disk_samples == 0 ? 0.0 : 2.0 * hi / static_cast<double>(disk_samples);
}

DistanceBracket dist_to_Q(const SpectralSample& sample, Complex z, std::size_t disk_samples) {
  DistanceBracket out;
  out.disk_samples = disk_samples;
  if (membership(sample, z).inside) return out;
  if (disk_samples < 3) throw Error(ErrorCode::invalid_argument, "dist_to_Q needs at least 3 disk samples");
  double nearest = std::numeric_limits<double>::infinity();
  for (Complex l : sample.points()) nearest = std::min(nearest, std::abs(z - l));
  auto inside = [&](double eps) { return membership(fatten(sample, eps, disk_samples), z).inside; };
  double lo = 0.0;
  double hi = nearest;
  for (int grow = 0; !inside(hi); ++grow) {
    if (grow > 60) throw Error(ErrorCode::no_convergence, "dist_to_Q could not bracket the distance");
    lo = hi;
    hi *= 2.0;
  }
  const double width = 1e-6 * (1.0 + std::abs(z));
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

}  // namespace spec2
