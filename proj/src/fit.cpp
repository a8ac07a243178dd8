#include "wwb/fit.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "wwb/error.hpp"
#include "wwb/numeric.hpp"

namespace wwb {

LogLogFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError(fmt::format("fit needs equal lengths, got {} and {}", x.size(), y.size()));
  std::vector<double> xs, ys;
  xs.reserve(x.size());
  ys.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  LogLogFit fit;
  fit.used = xs.size();
  fit.dropped = x.size() - xs.size();
  if (fit.used < 3) throw FitError(fmt::format("fit needs at least 3 finite points, got {}", fit.used));

  const double n = static_cast<double>(fit.used);
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (!(sxx.value() > 0.0)) throw FitError("fit abscissae are all equal");
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  if (syy.value() == 0.0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = (sxy.value() * sxy.value()) / (sxx.value() * syy.value());
  }
  return fit;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError(fmt::format("fit needs equal lengths, got {} and {}", x.size(), y.size()));
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = x[i] > 0.0 ? std::log(x[i]) : std::nan("");
    ly[i] = y[i] > 0.0 ? std::log(y[i]) : std::nan("");
  }
  return fit_linear(lx, ly);
}

}  // namespace wwb
