// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spec2/spec2.hpp"

using namespace spec2;

namespace {

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-10;
constexpr double kClosedFormSeconds = 1.0;
constexpr double kSlopeTol = 1e-3;
constexpr double kGapTol = 1e-10;
constexpr double kNilpotentTol = 1e-10;
constexpr double kModulusTol = 1e-8;
constexpr double kShiftSeconds = 5.0;
constexpr double kGeometryBand = 1e-9;
constexpr double kGeometrySeconds = 30.0;
constexpr double kIntervalTol = 1e-9;
// gamma is the square root of a pencil eigenvalue, so rounding of size
// ulp * ||B|| shows up as sqrt(ulp * ||B||) in gamma.
constexpr double kGammaSlack = 1e-7;
constexpr double kMappedRelTol = 1e-8;
constexpr double kInvariantTol = 1e-9;
constexpr double kBackwardTol = 1e-10;
constexpr double kSimilarityTol = 1e-8;
constexpr double kSvdOracleTol = 1e-12;

// Largest companion backward error over every solve in this run.
double g_max_backward = 0.0;

Spec2Result solve(const GalerkinMatrices& g) {
  Spec2Result r = g.alpha ? spec2_shifted(g) : spec2::spec2(g);
  for (const auto& p : r.points) g_max_backward = std::max(g_max_backward, p.backward_error);
  return r;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]);
    const double y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Outcome closed_form() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    const double eps = 1.0 / static_cast<double>(n);
    const auto model = make_deflated_identity(n + 2);
    const auto values = solve(assemble(*model, model->trial_space(n, eps))).values();
    const auto expected = oracle::deflated_identity_closed_form(n, eps);
    if (values.size() != expected.size()) return {false, "wrong point count"};
    worst = std::max(worst, oracle::matched_distance(values, expected));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= kClosedFormTol && secs < kClosedFormSeconds,
          fmt("max error %.2e (tol %.0e), %.3f s", worst, kClosedFormTol, secs)};
}

Outcome exact_rates() {
  std::vector<double> eps_list, dist_list, re_list;
  double worst_gap = 0.0;
  for (std::size_t n = 4; n <= 32; ++n) {
    const double eps = 1.0 / static_cast<double>(n);
    const auto model = make_deflated_identity(n + 2);
    const auto space = model->trial_space(n, eps);
    auto result = solve(assemble(*model, space));
    double dist = 1e300;
    double re = 0.0;
    for (Complex z : result.values()) {
      if (std::abs(z) < dist) {
        dist = std::abs(z);
        re = z.real();
      }
    }
    const auto id = cluster(result, 0.0, 0.5);
    const auto sub = subspace(result, id);
    const ComplexMatrix minus_vectors = space.basis * sub.minus;
    const double gap = subspace_gap(minus_vectors, ComplexMatrix(model->eigenvector_zero())).symmetric;
    worst_gap = std::max(worst_gap, std::abs(gap - eps));
    eps_list.push_back(eps);
    dist_list.push_back(dist);
    re_list.push_back(re);
  }
  const double s_dist = slope(eps_list, dist_list);
  const double s_re = slope(eps_list, re_list);
  const bool pass = std::abs(s_dist - 1.0) <= kSlopeTol && std::abs(s_re - 2.0) <= kSlopeTol && worst_gap <= kGapTol;
  return {pass, fmt("slope(dist) %.6f, slope(Re) %.6f, eigenspace gap error %.2e", s_dist, s_re, worst_gap)};
}

Outcome pollution_contrast() {
  double worst_fs = 0.0;
  double worst_mod = 0.0;
  double worst_hausdorff_excess = -1e300;
  double worst_oracle = 0.0;
  double secs32 = 0.0;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u}) {
    const auto start = std::chrono::steady_clock::now();
    const auto shift = make_bilateral_shift(2 * n + 5);
    const auto g = assemble(*shift, shift->section(n));
    const auto values = solve(g).values();
    if (n == 32) secs32 = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (n <= 16) {
      for (Complex z : eig_dense(finite_section(g), false).values) worst_fs = std::max(worst_fs, std::abs(z));
    }
    for (Complex z : values) worst_mod = std::max(worst_mod, std::abs(std::abs(z) - 1.0));
    // One-sided Hausdorff distance from the unit circle to the points.
    double hausdorff = 0.0;
    const int samples = 20000;
    for (int k = 0; k < samples; ++k) {
      const Complex c = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
      double nearest = 1e300;
      for (Complex z : values) nearest = std::min(nearest, std::abs(c - z));
      hausdorff = std::max(hausdorff, nearest);
    }
    const double bound = std::numbers::pi / static_cast<double>(2 * n + 2);
    worst_hausdorff_excess = std::max(worst_hausdorff_excess, hausdorff - bound);
    worst_oracle = std::max(worst_oracle, oracle::matched_distance(values, oracle::shift_section_points(2 * n + 1)));
  }
  const bool pass = worst_fs <= kNilpotentTol && worst_mod <= kModulusTol && worst_hausdorff_excess <= 0.0 &&
                    worst_oracle <= kModulusTol && secs32 < kShiftSeconds;
  return {pass, fmt("finite section max |z| %.1e, max ||z|-1| %.1e, Hausdorff margin %.2e", worst_fs, worst_mod,
                    -worst_hausdorff_excess) +
                    fmt(", oracle distance %.1e, n=32 in %.3f s", worst_oracle, secs32)};
}

Outcome geometry_suite() {
  const auto start = std::chrono::steady_clock::now();
  oracle::Rng rng(20260401);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::uniform_real_distribution<double> radius(0.02, 1.0);
  std::size_t contain = 0, conj = 0, real_line = 0, triple = 0, fat = 0, dist = 0, compared = 0;
  std::string first;
  for (int trial = 0; trial < 200; ++trial) {
    const SpectralSample sample(oracle::random_sigma(rng, 6));
    for (Complex l : sample.points()) contain += membership(sample, l).inside ? 0 : 1;
    for (int p = 0; p < 50; ++p) {
      const double re = box(rng);
      const double im = box(rng);
      const Complex z(re, im);
      const bool in = membership(sample, z).inside;
      conj += in == membership(sample, std::conj(z)).inside ? 0 : 1;
      bool in_sample = false;
      for (Complex l : sample.points()) in_sample = in_sample || l == Complex(re, 0.0);
      real_line += membership(sample, re).inside == in_sample ? 0 : 1;
      const auto t = triple_membership(sample, z);
      if (std::abs(t.margin) > kGeometryBand) {
        ++compared;
        triple += t.inside == in ? 0 : 1;
      }
      const double exact = oracle::arc_distance_to_q(sample.points(), z, in);
      const double eps = radius(rng);
      const bool fat_in = membership(fatten(sample, eps, 64), z).inside;
      const double band = 2.0 * eps / 64.0;
      if ((exact > eps + kGeometryBand && fat_in) || (exact < eps - band && !fat_in)) {
        if (fat++ == 0) first = fmt("; first fattening miss: z = %.6g%+.6gi", re, im) + fmt(" eps %.6g dist %.6g", eps, exact);
      }
      if (p == 0) {
        const auto bracket = dist_to_Q(sample, z, 64);
        if (bracket.hi < exact - kGeometryBand || bracket.lo > exact + bracket.discretization_band() + kGeometryBand) {
          if (dist++ == 0) first += fmt("; first bracket miss: [%.6g, %.6g] vs %.6g", bracket.lo, bracket.hi, exact);
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::size_t violations = contain + conj + real_line + triple + fat + dist;
  std::string detail = "violations: sample " + std::to_string(contain) + ", conjugation " + std::to_string(conj) +
                       ", real line " + std::to_string(real_line) + ", hull/triple " + std::to_string(triple) + " of " +
                       std::to_string(compared) + ", fattening " + std::to_string(fat) + ", bisection " +
                       std::to_string(dist) + fmt("; %.2f s", secs) + first;
  return {violations == 0 && secs < kGeometrySeconds, detail};
}

std::vector<Complex> random_diagonal(oracle::Rng& rng, std::size_t w, bool real) {
  std::vector<Complex> d;
  for (std::size_t i = 0; i < w; ++i) {
    const Complex z = oracle::random_complex(rng, 2.0);
    d.push_back(real ? Complex(z.real(), 0.0) : z);
  }
  return d;
}

Outcome containment() {
  oracle::Rng rng(20260402);
  std::uniform_int_distribution<std::size_t> dims(1, 12);
  std::size_t violations = 0;
  std::size_t points = 0;
  for (int run = 0; run < 100; ++run) {
    const auto model = make_diagonal_normal(random_diagonal(rng, 14, run % 5 == 0));
    const auto d = static_cast<Eigen::Index>(dims(rng));
    const auto g = assemble(*model, TrialSpace{oracle::random_matrix(rng, 14, d), "random"});
    const SpectralSample sample(model->spectrum().point_spectrum);
    for (Complex z : solve(g).values()) {
      ++points;
      violations += membership(sample, z).inside ? 0 : 1;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(points) + " points"};
}

Outcome enclosure_certificates() {
  oracle::Rng rng(20260403);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> dims(1, 10);
  std::size_t basic_bad = 0, sharp_bad = 0, gamma_bad = 0, sharp_checked = 0, checked = 0;
  double worst_gamma_margin = 1e300;
  auto check_run = [&](const OperatorModel& model, const GalerkinMatrices& g) {
    const SpectralData spectrum = model.spectrum();
    std::vector<double> real_spec;
    for (Complex l : spectrum.sample()) real_spec.push_back(l.real());
    for (const auto& p : solve(g).points) {
      ++checked;
      const Interval basic = basic_interval(p.z);
      bool meets = false;
      for (double l : real_spec) meets = meets || basic.contains(l, kIntervalTol);
      basic_bad += meets ? 0 : 1;
      const double gamma = residual_gamma(g, ComplexMatrix(p.v), p.z);
      const double dist = spectrum.distance(p.z);
      worst_gamma_margin = std::min(worst_gamma_margin, gamma - dist);
      gamma_bad += dist <= gamma + kGammaSlack ? 0 : 1;
      const auto window = auto_window(spectrum, p.z);
      if (!window) continue;
      const double mid = 0.5 * (window->first + window->second);
      const double half = 0.5 * (window->second - window->first);
      if (!(std::abs(p.z - mid) < half)) continue;
      ++sharp_checked;
      const Interval sharp = sharpened_interval(p.z, window->first, window->second);
      bool isolated = false;
      for (double l : real_spec) {
        if (l > window->first && l < window->second) isolated = isolated || sharp.contains(l, kIntervalTol);
      }
      sharp_bad += isolated ? 0 : 1;
    }
  };
  for (int run = 0; run < 100; ++run) {
    if (run % 10 == 9) {
      const std::size_t n = 4 + static_cast<std::size_t>(run / 10) * 3;
      const auto model = make_deflated_identity(n + 2);
      check_run(*model, assemble(*model, model->trial_space(n, 1.0 / static_cast<double>(n))));
      continue;
    }
    std::vector<Complex> diag;
    for (int i = 0; i < 12; ++i) diag.emplace_back(3.0 * normal(rng), 0.0);
    const auto model = make_diagonal_normal(diag);
    const auto d = static_cast<Eigen::Index>(dims(rng));
    check_run(*model, assemble(*model, TrialSpace{oracle::random_matrix(rng, 12, d), "random"}));
  }
  const std::size_t bad = basic_bad + sharp_bad + gamma_bad;
  return {bad == 0, "violations: basic " + std::to_string(basic_bad) + ", sharpened " + std::to_string(sharp_bad) +
                        " of " + std::to_string(sharp_checked) + ", residual " + std::to_string(gamma_bad) + " over " +
                        std::to_string(checked) + fmt(" points; min gamma - dist %.2e", worst_gamma_margin)};
}

Outcome shift_invert() {
  oracle::Rng rng(20260404);
  std::uniform_real_distribution<double> shift(-4.0, 4.0);
  double worst = 0.0;
  std::size_t infinite = 0;
  for (int run = 0; run < 20; ++run) {
    double alpha = shift(rng);
    std::shared_ptr<const OperatorModel> model;
    TrialSpace space;
    if (run % 2 == 0) {
      const std::size_t n = 4 + static_cast<std::size_t>(run);
      auto m = make_deflated_identity(n + 2);
      space = m->trial_space(n, 1.0 / static_cast<double>(n));
      model = m;
    } else {
      auto m = make_diagonal_normal(random_diagonal(rng, 10, run % 4 == 1));
      space = TrialSpace{oracle::random_matrix(rng, 10, 1 + run % 7), "random"};
      model = m;
    }
    while (model->spectrum().distance(alpha) < 1e-3) alpha = shift(rng);
    const auto direct = solve(assemble(*model, space)).values();
    const auto mapped = solve(assemble_shifted(*model, space, alpha));
    infinite += mapped.points_at_infinity;
    if (mapped.points.size() != direct.size()) return {false, "mapped solve lost points"};
    double scale = 1.0;
    for (Complex z : direct) scale = std::max(scale, std::abs(z));
    worst = std::max(worst, oracle::matched_distance(mapped.values(), direct) / scale);
  }
  const auto unbounded = make_unbounded_diagonal(16, "linear");
  const auto mapped = solve(assemble_shifted(*unbounded, unbounded->leading_space(4), 0.5)).values();
  const std::vector<Complex> expected{1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0};
  const double worst_invariant = mapped.size() == expected.size() ? oracle::matched_distance(mapped, expected) : 1e300;
  return {worst <= kMappedRelTol && infinite == 0 && worst_invariant <= kInvariantTol,
          fmt("bounded max relative difference %.2e, invariant case error %.2e", worst, worst_invariant)};
}

Outcome eigensolver_suite() {
  oracle::Rng rng(20260405);
  double worst_backward = 0.0;
  double worst_similarity = 0.0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 1 + (trial * 11) % 64;
    const ComplexMatrix s = oracle::random_matrix(rng, d, d);
    const auto pairs = eig_dense(s, true);
    for (double be : pairs.backward_errors) worst_backward = std::max(worst_backward, be);
    const ComplexMatrix p = oracle::random_well_conditioned(rng, d);
    const auto similar = eig_dense(p * s * p.inverse(), false).values;
    worst_similarity = std::max(worst_similarity, oracle::matched_distance(pairs.values, similar) / std::max(1.0, s.norm()));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 30;
    const Eigen::Index k = 1 + trial % std::min<Eigen::Index>(n - 1, 8);
    const ComplexMatrix u = oracle::random_matrix(rng, n, k);
    const double weight = trial % 2 == 0 ? 1e-4 : 1.0;
    const ComplexMatrix v = u + weight * oracle::random_matrix(rng, n, k);
    worst_gap = std::max(worst_gap, std::abs(subspace_gap(u, v).forward - oracle::principal_angle_gap(u, v)));
  }
  worst_backward = std::max(worst_backward, g_max_backward);
  return {worst_backward <= kBackwardTol && worst_similarity <= kSimilarityTol && worst_gap <= kSvdOracleTol,
          fmt("max backward error %.2e, similarity %.2e, gap vs SVD %.2e", worst_backward, worst_similarity, worst_gap)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  // The eigensolver suite runs last so that it sees every companion solve.
  const std::vector<Criterion> criteria{
      {"1 deflated identity closed form", closed_form},
      {"2 exact convergence rates", exact_rates},
      {"3 pollution contrast on the bilateral shift", pollution_contrast},
      {"4 geometry suite", geometry_suite},
      {"5 containment in Q(spectrum)", containment},
      {"6 enclosure certificates", enclosure_certificates},
      {"7 shift-and-invert consistency", shift_invert},
      {"8 eigensolver property suite", eigensolver_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-46s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
