// SPDX-License-Identifier: Apache-2.0

#include "spec2/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spec2/error.hpp"

namespace spec2 {

Interval basic_interval(Complex z) {
  const double h = std::abs(z.imag());
  return {z.real() - h, z.real() + h};
}

Interval sharpened_interval(Complex z, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::invalid_argument, "window needs a < b");
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  if (!(std::abs(z - mid) < half)) {
    throw Error(ErrorCode::out_of_disc, "point is not inside the open disc over the window");
  }
  const double h2 = z.imag() * z.imag();
  return {z.real() - h2 / (b - z.real()), z.real() + h2 / (z.real() - a)};
}

DiscCertificate residual_enclosure(Complex z, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::invalid_argument, "residual must be finite and nonnegative");
  }
  return {z, gamma};
}

std::optional<std::pair<double, double>> auto_window(const SpectralData& spectrum, Complex z) {
  std::vector<double> real_points;
  for (Complex p : spectrum.sample()) {
    if (p.imag() == 0.0) real_points.push_back(p.real());
  }
  std::sort(real_points.begin(), real_points.end());
  real_points.erase(std::unique(real_points.begin(), real_points.end()), real_points.end());
  if (real_points.size() < 2) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = 1; i < real_points.size(); ++i) {
    if (std::abs(real_points[i] - z.real()) < std::abs(real_points[k] - z.real())) k = i;
  }
  const double lambda = real_points[k];
  double a = k > 0 ? 0.5 * (real_points[k - 1] + lambda) : std::numeric_limits<double>::quiet_NaN();
  double b = k + 1 < real_points.size() ? 0.5 * (lambda + real_points[k + 1]) : std::numeric_limits<double>::quiet_NaN();
  if (std::isnan(a)) a = lambda - (b - lambda);
  if (std::isnan(b)) b = lambda + (lambda - a);
  return std::make_pair(a, b);
}

EnclosureReport enclose(Complex z, bool self_adjoint, std::optional<std::pair<double, double>> window,
                        std::optional<double> gamma) {
  EnclosureReport report;
  report.z = z;
  report.basic = basic_interval(z);
  report.gamma = gamma;
  report.window = window;
  std::string verdict;
  if (self_adjoint) {
    verdict = "basic";
    if (window) {
      try {
        report.sharpened = sharpened_interval(z, window->first, window->second);
        verdict += "+sharpened";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::out_of_disc) throw;
        verdict += "+outside-disc";
      }
    }
  } else {
    verdict = "normal";
  }
  if (gamma) {
    (void)residual_enclosure(z, *gamma);
    verdict += "+residual";
  }
  report.verdict = verdict;
  return report;
}

std::vector<LimitPoint> filtered_limit_points(const std::vector<std::vector<TrackedPoint>>& levels,
                                              const std::vector<double>& gamma_thresholds) {
  if (levels.empty()) return {};
  if (gamma_thresholds.size() != levels.size()) {
    throw Error(ErrorCode::invalid_argument, "need one gamma threshold per level");
  }
  struct Chain {
    TrackedPoint last;
    std::size_t length = 1;
  };
  std::vector<Chain> chains;
  for (const auto& p : levels[0]) {
    if (p.gamma <= gamma_thresholds[0]) chains.push_back({p, 1});
  }
  for (std::size_t level = 1; level < levels.size() && !chains.empty(); ++level) {
    const auto& next = levels[level];
    // All admissible (chain, candidate) links, claimed greedily by distance.
    struct Link {
      double dist;
      std::size_t chain;
      std::size_t point;
    };
    std::vector<Link> links;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (next[j].gamma > gamma_thresholds[level]) continue;
        const double dist = std::abs(next[j].z - chains[c].last.z);
        const double rho = std::max(10.0 * next[j].gamma, 1e-6);
        if (dist <= rho) links.push_back({dist, c, j});
      }
    }
    std::stable_sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.dist < y.dist; });
    std::vector<bool> chain_done(chains.size(), false);
    std::vector<bool> point_taken(next.size(), false);
    std::vector<Chain> extended;
    for (const auto& link : links) {
      if (chain_done[link.chain] || point_taken[link.point]) continue;
      chain_done[link.chain] = true;
      point_taken[link.point] = true;
      extended.push_back({next[link.point], chains[link.chain].length + 1});
    }
    chains = std::move(extended);
  }
  std::vector<LimitPoint> out;
  for (const auto& c : chains) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const LimitPoint& p) { return std::abs(p.z - c.last.z) <= 1e-8; });
    if (!dup) out.push_back({c.last.z, c.last.gamma, c.length});
  }
  std::sort(out.begin(), out.end(), [](const LimitPoint& x, const LimitPoint& y) { return lex_less(x.z, y.z); });
  return out;
}

}  // namespace spec2
