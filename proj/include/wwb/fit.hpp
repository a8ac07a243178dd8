#pragma once

#include <cstddef>
#include <span>

namespace wwb {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;
};

/// Ordinary least squares of log(y) on log(x).  Points with non-finite logs are dropped
/// and counted; FitError with fewer than 3 usable points.  A constant series gives slope 0
/// and r_squared 1.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Least squares of y on x (no logs), same dropping rules.
LogLogFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace wwb
