// SPDX-License-Identifier: Apache-2.0

#include "spec2cli/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spec2/error.hpp"

namespace spec2::cli {

RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys, bool exclude_floor) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::invalid_argument, "rate fit needs equally many x and y");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i])) keep.push_back(i);
  }
  if (exclude_floor) {
    // The smallest gaps are the ones closest to the rounding floor.
    std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    keep.erase(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(keep.size() / 4));
    std::sort(keep.begin(), keep.end());
  }
  if (keep.size() < 4) {
    throw Error(ErrorCode::invalid_argument,
                "rate fit needs at least 4 positive points, have " + std::to_string(keep.size()));
  }
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i : keep) {
    fit.xs.push_back(xs[i]);
    fit.ys.push_back(ys[i]);
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const auto n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::invalid_argument, "rate fit needs at least two distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

}  // namespace spec2::cli
