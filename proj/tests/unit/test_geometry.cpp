// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "spec2/error.hpp"
#include "spec2/geometry.hpp"

using namespace spec2;
using Catch::Matchers::WithinAbs;

namespace {

Complex random_probe(oracle::Rng& rng) {
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  const double re = box(rng);
  const double im = box(rng);
  return {re, im};
}

// t |l1|^2 + (1 - t) |l2|^2 - 2 z m(t) + z^2 at an arc point.
Complex curve_residual(const GammaArc& arc, double t) {
  const Complex z = arc.point(t);
  const double m = t * arc.lambda1.real() + (1.0 - t) * arc.lambda2.real();
  return t * std::norm(arc.lambda1) + (1.0 - t) * std::norm(arc.lambda2) - 2.0 * z * m + z * z;
}

}  // namespace

TEST_CASE("sigma_z examples", "[geometry]") {
  const SpectralSample pm({-1.0, 1.0});
  auto s = sigma_z(pm, Complex(0.0, 1.0));
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - Complex(0.0, 2.0)) <= 1e-15);
  CHECK(std::abs(s[1] - Complex(0.0, -2.0)) <= 1e-15);
  s = sigma_z(pm, 1.0);
  CHECK(s[1] == Complex(0.0));
  s = sigma_z(SpectralSample({Complex(1.0, 1.0)}), 0.0);
  CHECK(s[0] == Complex(2.0));
}

TEST_CASE("spectral samples are deduplicated and validated", "[geometry]") {
  const SpectralSample s({1.0, Complex(1.0 + 1e-16, 0.0), 2.0, 1.0});
  CHECK(s.size() == 2);
  CHECK_THROWS_AS(SpectralSample({}), Error);
  CHECK_THROWS_AS(SpectralSample({Complex(std::nan(""), 0.0)}), Error);
}

TEST_CASE("membership examples", "[geometry]") {
  const SpectralSample pm({-1.0, 1.0});
  const auto in = membership(pm, Complex(0.0, 1.0));
  CHECK(in.inside);
  REQUIRE(in.hull_certificate.has_value());
  REQUIRE(in.witness_triple.has_value());
  const auto& cert = *in.hull_certificate;
  CHECK_THAT(cert.weights[0] + cert.weights[1] + cert.weights[2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(cert.t_hat, WithinAbs(0.5, 1e-15));
  // The certificate reproduces the origin.
  const auto sz = sigma_z(pm, Complex(0.0, 1.0));
  Complex combo = 0.0;
  for (int k = 0; k < 3; ++k) combo += cert.weights[k] * sz[cert.indices[k]];
  CHECK(std::abs(combo) <= 1e-14);

  const SpectralSample single({Complex(0.0, 2.0)});
  CHECK(membership(single, Complex(0.0, 2.0)).inside);
  CHECK(membership(single, Complex(0.0, -2.0)).inside);
  CHECK_FALSE(membership(single, 1.0).inside);
  CHECK_FALSE(membership(pm, 0.0).inside);
}

TEST_CASE("hull certificates are valid convex combinations", "[geometry][property]") {
  oracle::Rng rng(51);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SpectralSample sample(oracle::random_sigma(rng, 6));
    const Complex z = random_probe(rng);
    const auto q = membership(sample, z);
    if (!q.inside) continue;
    ++checked;
    REQUIRE(q.hull_certificate.has_value());
    const auto& cert = *q.hull_certificate;
    const auto sz = sigma_z(sample, z);
    Complex combo = 0.0;
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) {
      CHECK(cert.weights[k] >= 0.0);
      combo += cert.weights[k] * sz[cert.indices[k]];
      scale = std::max(scale, std::abs(sz[cert.indices[k]]));
    }
    CHECK(std::abs(combo) <= 1e-9 * std::max(1.0, scale));
    CHECK(cert.t_hat >= 0.0);
    CHECK(cert.t_hat <= 1.0);
    CHECK(cert.s_hat >= 0.0);
    CHECK(cert.s_hat <= 1.0);
    CHECK_THAT(cert.weights[1], WithinAbs((1.0 - cert.t_hat) * cert.s_hat, 1e-12));
  }
  CHECK(checked > 20);
}

TEST_CASE("gamma arcs", "[geometry]") {
  const auto arc = gamma_arc(1.0, 4.0, ArcSign::plus);
  CHECK(arc.kind == ArcKind::circle);
  CHECK_THAT(arc.center, WithinAbs(2.5, 1e-15));
  CHECK_THAT(arc.radius, WithinAbs(1.5, 1e-15));
  CHECK(std::abs(arc.point(1.0) - 1.0) <= 1e-15);
  CHECK(std::abs(arc.point(0.0) - 4.0) <= 1e-15);
  CHECK(std::abs(arc.point(0.5) - Complex(2.5, 1.5)) <= 1e-15);

  const auto lifted = gamma_arc(Complex(0.0, 1.0), Complex(2.0, 1.0), ArcSign::plus);
  CHECK_THAT(lifted.center, WithinAbs(1.0, 1e-15));
  CHECK_THAT(lifted.radius, WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(std::abs(lifted.point(1.0) - Complex(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(lifted.point(0.0) - Complex(2.0, 1.0)) <= 1e-15);
  const auto below = gamma_arc(Complex(0.0, 1.0), Complex(2.0, 1.0), ArcSign::minus);
  CHECK(std::abs(below.point(0.3) - std::conj(lifted.point(0.3))) == 0.0);

  const auto seg = gamma_arc(Complex(1.0, 2.0), Complex(1.0, -2.0), ArcSign::plus);
  CHECK(seg.kind == ArcKind::segment);
  for (Complex p : seg.sample(9)) {
    CHECK(p.real() == 1.0);
    CHECK_THAT(p.imag(), WithinAbs(2.0, 1e-15));
  }
  const auto pts = arc.sample(5);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front() == arc.point(1.0));
  CHECK(pts.back() == arc.point(0.0));
}

TEST_CASE("arc points lie on their circle and solve the defining quadratic", "[geometry][property]") {
  oracle::Rng rng(52);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex l1 = oracle::random_complex(rng, 2.0);
    const Complex l2 = oracle::random_complex(rng, 2.0);
    const auto plus = gamma_arc(l1, l2, ArcSign::plus);
    const auto minus = gamma_arc(l1, l2, ArcSign::minus);
    const double scale = std::max({1.0, std::norm(l1), std::norm(l2)});
    for (int s = 0; s < 5; ++s) {
      const double t = unit(rng);
      const Complex zp = plus.point(t);
      const Complex zm = minus.point(t);
      if (plus.kind == ArcKind::circle) {
        CHECK(std::abs(std::abs(zp - plus.center) - plus.radius) <= 1e-12 * scale);
        CHECK(std::abs(std::abs(zm - plus.center) - plus.radius) <= 1e-12 * scale);
      }
      CHECK(std::abs(curve_residual(plus, t)) <= 1e-12 * scale);
      CHECK(std::abs(curve_residual(minus, t)) <= 1e-12 * scale);
      // Vieta: sum 2 m(t), product t |l1|^2 + (1 - t) |l2|^2.
      const double m = t * l1.real() + (1.0 - t) * l2.real();
      CHECK(std::abs(zp + zm - 2.0 * m) <= 1e-12 * scale);
      CHECK(std::abs(zp * zm - (t * std::norm(l1) + (1.0 - t) * std::norm(l2))) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("triple region boundaries", "[geometry]") {
  const auto curve = q_region_boundary(1.0, 2.0, 4.0, ArcSign::plus, 64);
  CHECK(curve.size() == 3 * 63);
  for (Complex p : curve) CHECK(p.imag() >= 0.0);
  auto hits = [&](Complex target) {
    double best = 1e300;
    for (Complex p : curve) best = std::min(best, std::abs(p - target));
    return best;
  };
  CHECK(hits(1.0) <= 1e-15);
  CHECK(hits(2.0) <= 1e-15);
  CHECK(hits(4.0) <= 1e-15);

  const auto lifted = q_region_boundary(Complex(1.0, 2.5), Complex(2.0, 1.0), 4.0, ArcSign::plus, 32);
  CHECK(std::abs(lifted.front() - Complex(1.0, 2.5)) <= 1e-15);
  CHECK(std::abs(lifted[31] - Complex(2.0, 1.0)) <= 1e-15);

  // Coincident pair: one arc collapses to a point.
  const auto pair = q_region_boundary(1.0, 1.0, 3.0, ArcSign::minus, 16);
  for (std::size_t k = 0; k < 15; ++k) CHECK(std::abs(pair[k] - 1.0) <= 1e-15);
  try {
    (void)q_region_boundary(2.0, 2.0, 2.0, ArcSign::plus);
    FAIL("expected DegenerateTriple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_triple);
  }
}

TEST_CASE("Q contains the sample, is conjugation symmetric and meets the real line only in the sample",
          "[geometry][property]") {
  oracle::Rng rng(53);
  std::uniform_real_distribution<double> line(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralSample sample(oracle::random_sigma(rng, 6));
    for (Complex l : sample.points()) {
      CHECK(membership(sample, l).inside);
      CHECK(membership(sample, std::conj(l)).inside);
    }
    for (int p = 0; p < 20; ++p) {
      const Complex z = random_probe(rng);
      CHECK(membership(sample, z).inside == membership(sample, std::conj(z)).inside);
      const double x = line(rng);
      bool in_sample = false;
      for (Complex l : sample.points()) in_sample = in_sample || (l == Complex(x, 0.0));
      CHECK(membership(sample, x).inside == in_sample);
    }
  }
}

TEST_CASE("hull membership agrees with triple regions", "[geometry][property]") {
  oracle::Rng rng(54);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const SpectralSample sample(oracle::random_sigma(rng, 5));
    for (int p = 0; p < 20; ++p) {
      const Complex z = random_probe(rng);
      const auto triple = triple_membership(sample, z);
      if (std::abs(triple.margin) <= 1e-9) continue;
      ++compared;
      INFO("z = " << z << " margin " << triple.margin);
      CHECK(membership(sample, z).inside == triple.inside);
    }
  }
  CHECK(compared > 2500);
}

TEST_CASE("fattening", "[geometry]") {
  const SpectralSample s({Complex(1.0, 1.0), 3.0});
  CHECK(fatten(s, 0.0).points() == s.points());
  const auto cross = fatten(SpectralSample({0.0}), 1.0, 4, FattenMode::boundary);
  REQUIRE(cross.size() == 5);
  CHECK(cross.points()[0] == Complex(0.0));
  CHECK(std::abs(cross.points()[1] - 1.0) <= 1e-15);
  CHECK(std::abs(cross.points()[2] - Complex(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(cross.points()[3] + 1.0) <= 1e-15);
  CHECK(std::abs(cross.points()[4] - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(membership(fatten(SpectralSample({0.0}), 1.0), Complex(0.5, 0.5)).inside);
  // A disk across the real axis also covers its real chord.
  const auto filled = fatten(SpectralSample({0.0}), 1.0, 4);
  CHECK(filled.size() == 9);
  const Complex chord = filled.points()[6];
  CHECK(chord.imag() == 0.0);
  CHECK(membership(filled, chord).inside);
  CHECK_FALSE(membership(cross, chord).inside);
  CHECK(fatten(SpectralSample({Complex(0.0, 2.0)}), 1.0, 4).size() == 5);
  CHECK(fatten(SpectralSample({Complex(0.0, 2.0)}), 1.0, 4).real_intervals().empty());
  CHECK_THROWS_AS(fatten(s, -1.0), Error);
}

TEST_CASE("real intervals are sampled at the probe", "[geometry]") {
  const auto filled = fatten(SpectralSample({0.0}), 0.5, 4);
  REQUIRE(filled.real_intervals().size() == 1);
  CHECK(filled.real_intervals()[0].first == -0.5);
  CHECK(filled.real_intervals()[0].second == 0.5);
  // Between two chord samples and just off the axis: only the interval point at
  // re(z) puts z inside.
  const Complex z(0.15, 1e-6);
  CHECK(membership(filled, z).inside);
  CHECK_FALSE(membership(SpectralSample(filled.points()), z).inside);
  const auto near = filled.points_near(z);
  REQUIRE(near.size() == filled.size() + 1);
  CHECK(near.back() == Complex(0.15, 0.0));
  // The clamped endpoint 0.5 is already a circle sample.
  CHECK(filled.points_near(Complex(2.0, 1.0)).size() == filled.size());
  // Fattening again widens the interval.
  const auto twice = fatten(filled, 0.25, 4);
  CHECK(std::any_of(twice.real_intervals().begin(), twice.real_intervals().end(),
                    [](const auto& iv) { return iv.first == -0.75 && iv.second == 0.75; }));
  CHECK(membership(twice, Complex(0.7, 1e-7)).inside);
  CHECK_THROWS_AS(SpectralSample({0.0}, {{1.0, 0.0}}), Error);
}

TEST_CASE("dist_to_Q examples", "[geometry]") {
  const SpectralSample pm({-1.0, 1.0});
  auto d = dist_to_Q(pm, 1.0);
  CHECK(d.lo == 0.0);
  CHECK(d.hi == 0.0);
  d = dist_to_Q(pm, 2.0);
  CHECK(d.hi - d.lo <= 3e-6);
  CHECK(d.hi >= 1.0 - 1e-12);
  CHECK(d.lo <= 1.0 + d.discretization_band());
  // Q({-1, 1}) is the unit circle; its distance to 0 is 1.
  d = dist_to_Q(pm, 0.0);
  const double exact = oracle::arc_distance_to_q(pm.points(), 0.0, false);
  CHECK_THAT(exact, WithinAbs(1.0, 1e-15));
  CHECK(d.hi >= exact - 1e-12);
  CHECK(d.lo <= exact + d.discretization_band());
}

TEST_CASE("fattened membership matches the distance to Q", "[geometry][property]") {
  oracle::Rng rng(55);
  std::uniform_real_distribution<double> radius(0.05, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const SpectralSample sample(oracle::random_sigma(rng, 4));
    const Complex z = random_probe(rng);
    const bool inside = membership(sample, z).inside;
    const double exact = oracle::arc_distance_to_q(sample.points(), z, inside);
    const auto d = dist_to_Q(sample, z, 64);
    INFO("z = " << z << " exact " << exact << " bracket [" << d.lo << ", " << d.hi << "]");
    CHECK(d.hi >= exact - 1e-9);
    CHECK(d.lo <= exact + d.discretization_band() + 1e-9);

    const double eps = radius(rng);
    const bool fat = membership(fatten(sample, eps, 64), z).inside;
    const double band = 2.0 * eps / 64.0;
    if (exact > eps + 1e-9) {
      CHECK_FALSE(fat);
    }
    if (exact < eps - band) {
      CHECK(fat);
    }
  }
}
