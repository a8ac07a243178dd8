#include "wwb/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fmt/format.h>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"
#include "wwb/fit.hpp"
#include "wwb/numeric.hpp"
#include "wwb/parallel.hpp"
#include "wwb/rng.hpp"

namespace wwb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > -0.5 && beta < 0.5) || beta == 0.0) {
    throw DomainError(fmt::format("Riemann-Liouville order must lie in (-1/2, 1/2) without 0, got {}", beta));
  }
}

// Unnormalized I_-^beta of the pieces at the point x = ref - off, with every distance
// c - x evaluated as (c - ref) + off.  Callers pass the nearest breakpoint as ref so
// that distances near a singularity keep full relative precision.
double rl_sum(const std::vector<Piece>& pieces, double beta, double ref, double off) {
  CompensatedSum acc;
  for (const Piece& p : pieces) {
    const double db = (p.hi - ref) + off;
    if (db < 0.0) continue;
    if (db == 0.0) {
      if (beta < 0.0) return kInf;
      continue;
    }
    const double da = (p.lo - ref) + off;
    double term;
    if (da < 0.0) {
      term = std::pow(db, beta);
    } else if (da == 0.0) {
      if (beta < 0.0) return kInf;
      term = std::pow(db, beta);
    } else {
      // db^beta - da^beta without cancellation
      term = std::pow(da, beta) * std::expm1(beta * std::log1p((p.hi - p.lo) / da));
    }
    acc.add(p.value * term);
  }
  return acc.value();
}

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

// Integral over the real line of (I_-^beta f)^2 (without the C_H factor).
Quadrature rl_square_integral(const std::vector<Piece>& pieces, double beta) {
  std::vector<double> bp;
  for (const Piece& p : pieces) {
    bp.push_back(p.lo);
    bp.push_back(p.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  if (bp.empty()) return {};

  const double g = 1.0 / std::tgamma(beta + 1.0);
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  thread_local boost::math::quadrature::exp_sinh<double> es;
  constexpr double tol = 1e-10;

  CompensatedSum value;
  double error = 0.0;
  auto segment = [&](double a, double b) {
    auto f = [&](double x, double xc) {
      const double ref = xc < 0.0 ? a : b;  // xc = a - x on the left half, b - x on the right
      const double v = g * rl_sum(pieces, beta, ref, xc);
      (void)x;
      return v * v;
    };
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    const double q = ts.integrate(f, a, b, tol, &err, &l1, &levels);
    value.add(q);
    error += err;
  };

  const double span = std::max(bp.back() - bp.front(), 1.0);
  const double left = bp.front() - span;
  segment(left, bp.front());
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) segment(bp[i], bp[i + 1]);

  auto tail = [&](double u) {
    const double v = g * rl_sum(pieces, beta, left, u);
    return v * v;
  };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  value.add(es.integrate(tail, 0.0, kInf, tol, &err, &l1, &levels));
  error += err;
  return {value.value(), error};
}

std::mutex g_norm_mutex;
std::map<double, double> g_norm_cache;

}  // namespace

double rl_apply(const StepFunction& f, double beta, double x) {
  check_beta(beta);
  const std::vector<Piece> pieces = f.pieces();
  // I_-^beta f(x) only sees f on [x, inf): zero from the end of the support on
  if (pieces.empty() || x >= pieces.back().hi) return 0.0;
  return rl_sum(pieces, beta, x, 0.0) / std::tgamma(beta + 1.0);
}

double calibrate_norm_constant(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));
  if (hurst == 0.5) return 1.0;
  {
    std::lock_guard lock(g_norm_mutex);
    if (auto it = g_norm_cache.find(hurst); it != g_norm_cache.end()) return it->second;
  }
  const std::vector<Piece> unit{{0.0, 1.0, 1.0}};
  const Quadrature q = rl_square_integral(unit, hurst - 0.5);
  if (!(q.value > 0.0) || !std::isfinite(q.value) || q.error > 1e-9 * q.value) {
    throw NumericError(fmt::format("norm constant quadrature for H={} did not converge (value {}, error {})", hurst,
                                   q.value, q.error));
  }
  const double c = 1.0 / std::sqrt(q.value);
  std::lock_guard lock(g_norm_mutex);
  g_norm_cache.emplace(hurst, c);
  return c;
}

std::string_view to_string(NormMode m) { return m == NormMode::isometry ? "isometry" : "quadrature"; }

NormMode parse_norm_mode(std::string_view name) {
  if (name == "isometry") return NormMode::isometry;
  if (name == "quadrature") return NormMode::quadrature;
  throw ParameterError(fmt::format("unknown norm mode '{}'", name));
}

double ml_norm_sq(const StepFunction& f, double hurst, NormMode mode) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));
  if (mode == NormMode::isometry) return step_bilinear(f, f, hurst);

  const std::vector<Piece> pieces = f.pieces();
  if (hurst == 0.5) {
    CompensatedSum acc;
    for (const Piece& p : pieces) acc.add(p.value * p.value * (p.hi - p.lo));
    return acc.value();
  }
  const double c = calibrate_norm_constant(hurst);
  const Quadrature q = rl_square_integral(pieces, hurst - 0.5);
  const double value = c * c * q.value;
  const double error = c * c * q.error;
  if (!std::isfinite(value) || error > 1e-6 * std::abs(value) + 1e-14) {
    throw NumericError(fmt::format("quadrature of ||M f||^2 failed: H={}, {} pieces, value {}, error estimate {}", hurst,
                                   pieces.size(), value, error));
  }
  return value;
}

HardyLittlewood hardy_littlewood_check(const StepFunction& f, double hurst) {
  if (f.is_zero()) throw ParameterError("Hardy-Littlewood ratio undefined for f = 0");
  const double lp = f.lp_norm(1.0 / hurst);
  const double ratio = ml_norm_sq(f, hurst) / (lp * lp);
  return {ratio, std::isfinite(ratio) && ratio > 0.0};
}

StepFunction random_step_function(std::uint64_t seed, int pieces) {
  if (pieces < 1) throw ParameterError("random step function needs at least one piece");
  RandomStream rs(seed);
  std::vector<double> pts(static_cast<std::size_t>(pieces) + 1);
  for (double& x : pts) x = 4.0 * rs.uniform();
  std::sort(pts.begin(), pts.end());
  std::vector<Piece> p;
  for (int i = 0; i < pieces; ++i) p.push_back({pts[i], pts[i + 1], rs.normal()});
  StepFunction f = StepFunction::from_pieces(p);
  if (f.is_zero()) f = StepFunction::indicator(0.0, 1.0);
  return f;
}

HLCorpusReport hardy_littlewood_sweep(double hurst, std::size_t n_functions, int pieces, std::uint64_t seed,
                                      unsigned threads) {
  if (n_functions < 2) throw ParameterError("corpus needs at least two functions");
  std::vector<double> ratios(n_functions);
  parallel_for(n_functions, threads, [&](std::size_t i) {
    ratios[i] = hardy_littlewood_check(random_step_function(substream(seed, i), pieces), hurst).ratio;
  });
  HLCorpusReport r;
  r.hurst = hurst;
  r.n_functions = n_functions;
  const auto half = ratios.begin() + static_cast<std::ptrdiff_t>(n_functions / 2);
  r.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  r.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  const bool floor = hurst <= 0.5;
  r.bound = floor ? r.min_ratio : r.max_ratio;
  r.bound_half = floor ? *std::min_element(ratios.begin(), half) : *std::max_element(ratios.begin(), half);
  r.direction_ok = std::isfinite(r.bound) && r.bound > 0.0;
  r.stable = r.direction_ok && r.bound_half > 0.0 && std::max(r.bound, r.bound_half) <= 2.0 * std::min(r.bound, r.bound_half);
  return r;
}

std::string_view to_string(FamilyStrategy s) {
  switch (s) {
    case FamilyStrategy::contiguous:
      return "contiguous";
    case FamilyStrategy::random_gap:
      return "random_gap";
    case FamilyStrategy::adversarial_nested:
      return "adversarial_nested";
  }
  return "unknown";
}

FamilyStrategy parse_family_strategy(std::string_view name) {
  if (name == "contiguous") return FamilyStrategy::contiguous;
  if (name == "random_gap") return FamilyStrategy::random_gap;
  if (name == "adversarial_nested") return FamilyStrategy::adversarial_nested;
  throw ParameterError(fmt::format("unknown family strategy '{}'", name));
}

StepFunction KIntervalFamily::g(int M) const {
  if (M < 0 || static_cast<std::size_t>(M) > intervals.size()) {
    throw ParameterError(fmt::format("family has {} levels, asked for {}", intervals.size(), M));
  }
  const auto pw = alpha_powers(alpha, M);
  std::vector<Piece> p;
  for (int m = 0; m < M; ++m) {
    for (const auto& [lo, hi] : intervals[m]) p.push_back({lo, hi, pw[m]});
  }
  return StepFunction::from_pieces(p);
}

KIntervalFamily make_homogeneous_family(int k, double alpha, double hurst, int M, FamilyStrategy strategy,
                                        std::uint64_t seed) {
  if (k < 1) throw ParameterError(fmt::format("k must be >= 1, got {}", k));
  if (M < 1) throw ParameterError(fmt::format("M must be >= 1, got {}", M));
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError(fmt::format("alpha must lie in (0,1), got {}", alpha));
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));

  KIntervalFamily fam;
  fam.k = k;
  fam.alpha = alpha;
  fam.hurst = hurst;
  fam.b = std::pow(alpha, -1.0 / hurst);
  fam.strategy = strategy;
  fam.intervals.resize(static_cast<std::size_t>(M));

  RandomStream rs(seed);
  double x = 0.0;
  for (int m = 0; m < M; ++m) {
    const double len = std::pow(fam.b, m);
    auto& out = fam.intervals[m];
    switch (strategy) {
      case FamilyStrategy::contiguous:
        out.emplace_back(x, x + len);
        x += len;
        break;
      case FamilyStrategy::adversarial_nested:
        out.emplace_back(0.0, len);
        break;
      case FamilyStrategy::random_gap: {
        const int parts = 1 + static_cast<int>(rs.below(static_cast<std::uint64_t>(k)));
        std::vector<double> w(static_cast<std::size_t>(parts));
        double total = 0.0;
        for (double& v : w) total += (v = rs.uniform_open());
        for (double& v : w) {
          x += 0.5 * len * rs.uniform();  // gap
          out.emplace_back(x, x + len * v / total);
          x += len * v / total;
        }
        break;
      }
    }
  }
  return fam;
}

std::vector<HLReport> hls_sweep(int k, double alpha, double hurst, const std::vector<FamilyStrategy>& strategies,
                                int M_max, std::uint64_t seed) {
  if (M_max < 8) throw ParameterError(fmt::format("M_max must be >= 8, got {}", M_max));
  std::vector<HLReport> reports;
  for (FamilyStrategy s : strategies) {
    const KIntervalFamily fam = make_homogeneous_family(k, alpha, hurst, M_max, s, seed);
    HLReport r;
    r.strategy = s;
    r.k = k;
    r.alpha = alpha;
    r.hurst = hurst;
    std::vector<double> ms;
    for (int M = 1; M <= M_max; ++M) {
      const StepFunction g = fam.g(M);
      const double lp = g.lp_norm(1.0 / hurst);
      r.M_values.push_back(M);
      r.norms_sq.push_back(ml_norm_sq(g, hurst));
      r.lp_norms_sq.push_back(lp * lp);
      ms.push_back(M);
    }
    r.slope = fit_loglog(ms, r.norms_sq).slope;
    r.lp_slope = fit_loglog(ms, r.lp_norms_sq).slope;
    r.const_lo = kInf;
    r.const_hi = -kInf;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      r.const_lo = std::min(r.const_lo, r.norms_sq[i] / ms[i]);
      r.const_hi = std::max(r.const_hi, r.norms_sq[i] / ms[i]);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

double l1_positivity_check(const IntervalSet& I, const StepFunction& h, double hurst) {
  if (!(hurst > 0.0 && hurst < 0.5)) throw ParameterError(fmt::format("positivity check needs H in (0, 1/2), got {}", hurst));
  IntervalSet sorted = I;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Piece> ind;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].second > sorted[i].first)) throw ParameterError("interval set contains an empty interval");
    if (i > 0 && sorted[i].first < sorted[i - 1].second) throw ParameterError("interval set must be disjoint");
    ind.push_back({sorted[i].first, sorted[i].second, 1.0});
  }
  for (const Piece& p : h.pieces()) {
    if (p.value < 0.0) throw ParameterError("h must be nonnegative");
    const bool inside = std::any_of(sorted.begin(), sorted.end(),
                                    [&](const auto& iv) { return p.lo >= iv.first && p.hi <= iv.second; });
    if (!inside) throw ParameterError(fmt::format("h has support [{}, {}] outside I", p.lo, p.hi));
  }
  return step_bilinear(StepFunction::from_pieces(ind), h, hurst);
}

PositivityReport positivity_sweep(double hurst, std::size_t n_cases, std::uint64_t seed) {
  PositivityReport r;
  r.cases = n_cases;
  r.min_value = kInf;
  for (std::size_t c = 0; c < n_cases; ++c) {
    RandomStream rs(substream(seed, c));
    const int n_int = 1 + static_cast<int>(rs.below(5));
    std::vector<double> ends(2 * static_cast<std::size_t>(n_int));
    for (double& e : ends) e = 4.0 * rs.uniform();
    std::sort(ends.begin(), ends.end());
    IntervalSet I;
    for (int i = 0; i < n_int; ++i) {
      if (ends[2 * i + 1] > ends[2 * i]) I.emplace_back(ends[2 * i], ends[2 * i + 1]);
    }
    if (I.empty()) I.emplace_back(0.0, 1.0);
    const int n_pieces = 1 + static_cast<int>(rs.below(10));
    std::vector<Piece> hp;
    for (int i = 0; i < n_pieces; ++i) {
      const auto& [lo, hi] = I[rs.below(I.size())];
      double u = lo + (hi - lo) * rs.uniform();
      double v = lo + (hi - lo) * rs.uniform();
      if (u > v) std::swap(u, v);
      hp.push_back({u, v, 2.0 * rs.uniform()});
    }
    const double value = l1_positivity_check(I, StepFunction::from_pieces(hp), hurst);
    r.min_value = std::min(r.min_value, value);
    if (value < -1e-12) ++r.below_tolerance;
  }
  return r;
}

}  // namespace wwb
