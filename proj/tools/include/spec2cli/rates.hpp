// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace spec2::cli {

struct RateFit {
  std::vector<double> xs;  // points actually fitted
  std::vector<double> ys;
  double slope = 0.0;
  double intercept = 0.0;  // of log y = intercept + slope log x
  double r2 = 0.0;
};

/// Least squares on (log x, log y). Pairs with a nonpositive or non-finite
/// coordinate are skipped; exclude_floor also drops the 25% smallest x.
/// Throws spec2::Error(InvalidArgument) with fewer than 4 usable pairs.
RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys, bool exclude_floor = false);

}  // namespace spec2::cli
