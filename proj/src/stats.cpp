#include "wwb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"
#include "wwb/fit.hpp"
#include "wwb/numeric.hpp"
#include "wwb/parallel.hpp"

namespace wwb {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double loglog_floored(double u) {
  const double l = std::log(std::log(1.0 / u));
  return std::isfinite(l) && l > std::numbers::e ? l : std::numbers::e;
}

// Sum over the level-j partition; stride = b^{n-j} fine-grid steps.
double level_sum(const std::vector<double>& v, std::uint64_t stride, auto&& f) {
  CompensatedSum acc;
  for (std::uint64_t k = stride; k < v.size(); k += stride) acc.add(f(std::abs(v[k] - v[k - stride])));
  return acc.value();
}

std::uint64_t stride_for(const GridSpec& g, int j) { return g.intervals() / ipow_checked(static_cast<std::uint64_t>(g.b()), j); }

void resolve_levels(const PathSample& path, int& j_min, int& j_max) {
  if (j_max < 0) j_max = path.grid.level();
  if (j_min < 0 || j_min > j_max || j_max > path.grid.level()) {
    throw ParameterError(fmt::format("levels [{}, {}] not within the path level {}", j_min, j_max, path.grid.level()));
  }
}

// Max over all windows of `width` + 1 consecutive points of (max - min).
double sliding_range(const std::vector<double>& v, std::uint64_t width) {
  std::deque<std::size_t> hi, lo;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (!hi.empty() && v[hi.back()] <= v[i]) hi.pop_back();
    while (!lo.empty() && v[lo.back()] >= v[i]) lo.pop_back();
    hi.push_back(i);
    lo.push_back(i);
    if (i >= width) {
      const std::size_t start = i - width;
      while (hi.front() < start) hi.pop_front();
      while (lo.front() < start) lo.pop_front();
      best = std::max(best, v[hi.front()] - v[lo.front()]);
    }
  }
  return best;
}

}  // namespace

void fit_report(ScalingReport& r) {
  try {
    const LogLogFit f = fit_loglog(r.scales, r.stats);
    r.slope = f.slope;
    r.intercept = f.intercept;
    r.r_squared = f.r_squared;
  } catch (const FitError&) {
    r.slope = r.intercept = r.r_squared = kNaN;
  }
}

ScalingReport pvar_badic(const PathSample& path, double p, int up_to_level) {
  if (!(p > 0.0)) throw ParameterError(fmt::format("p-variation needs p > 0, got {}", p));
  if (up_to_level < 0 || up_to_level > path.grid.level()) {
    throw ParameterError(fmt::format("level {} exceeds the path level {}", up_to_level, path.grid.level()));
  }
  ScalingReport r;
  r.regime_label = std::string(to_string(path.params.regime()));
  const double b = path.grid.b();
  for (int j = 0; j <= up_to_level; ++j) {
    r.scales.push_back(std::pow(b, -j));
    r.stats.push_back(level_sum(path.values, stride_for(path.grid, j), [p](double x) { return std::pow(x, p); }));
  }
  fit_report(r);
  return r;
}

RoughnessEstimate roughness_exponent(const PathSample& path) {
  const int n = path.grid.level();
  if (n < 10) throw ParameterError(fmt::format("roughness estimate needs level >= 10, got {}", n));
  const double lb = std::log(static_cast<double>(path.grid.b()));
  std::vector<double> js, ls;
  double sn = 0.0;
  for (int j = n - 4; j <= n; ++j) {
    const double s = level_sum(path.values, stride_for(path.grid, j), [](double x) { return x * x; });
    if (!(s > 0.0)) throw EstimatorError(fmt::format("flat path: S_{}(2) = 0", j));
    js.push_back(j);
    ls.push_back(std::log(s) / lb);
    sn = s;
  }
  RoughnessEstimate r;
  r.level = n;
  r.gladyshev = 0.5 * (1.0 - std::log(sn) / lb / n);
  r.regression = 0.5 * (1.0 - fit_linear(js, ls).slope);
  return r;
}

std::string_view to_string(PhiVariant v) {
  switch (v) {
    case PhiVariant::subcritical: return "subcritical";
    case PhiVariant::critical: return "critical";
    case PhiVariant::supercritical_power: return "supercritical_power";
    case PhiVariant::custom_power: return "custom_power";
  }
  return "subcritical";
}

PhiVariant parse_phi_variant(std::string_view name) {
  for (auto v : {PhiVariant::subcritical, PhiVariant::critical, PhiVariant::supercritical_power,
                 PhiVariant::custom_power}) {
    if (name == to_string(v)) return v;
  }
  throw ParameterError(fmt::format("unknown phi variant '{}'", name));
}

PhiSpec PhiSpec::matched(const ModelParams& params) {
  PhiSpec s;
  s.hurst = params.hurst();
  s.K = params.K();
  switch (params.regime()) {
    case Regime::subcritical: s.variant = PhiVariant::subcritical; break;
    case Regime::critical: s.variant = PhiVariant::critical; break;
    case Regime::supercritical: s.variant = PhiVariant::supercritical_power; break;
  }
  return s;
}

double PhiSpec::operator()(double x) const {
  if (x == 0.0) return 0.0;
  double exponent = 1.0 / hurst;
  if (variant == PhiVariant::supercritical_power) exponent = 1.0 / K;
  if (variant == PhiVariant::custom_power) exponent = power;
  if (x > x0) return std::pow(x, exponent);
  const double lg = std::log(1.0 / x);
  double v = 0.0;
  switch (variant) {
    case PhiVariant::subcritical: v = std::pow(x / std::sqrt(2.0 * loglog_floored(x)), exponent); break;
    case PhiVariant::critical: v = std::pow(x / std::sqrt(2.0 * lg * loglog_floored(x) / hurst), exponent); break;
    case PhiVariant::supercritical_power:
    case PhiVariant::custom_power: v = std::pow(x, exponent); break;
  }
  return log_power == 0 ? v : v * std::pow(lg, log_power);
}

std::string_view to_string(PartitionStrategy s) {
  return s == PartitionStrategy::badic_sweep ? "badic_sweep" : "extrema_partition";
}

PartitionStrategy parse_partition_strategy(std::string_view name) {
  if (name == "badic_sweep") return PartitionStrategy::badic_sweep;
  if (name == "extrema_partition") return PartitionStrategy::extrema_partition;
  throw ParameterError(fmt::format("unknown partition strategy '{}'", name));
}

PhiVariationReport phi_variation(const PathSample& path, const PhiSpec& phi, PartitionStrategy strategy, int j_min,
                                 int j_max) {
  resolve_levels(path, j_min, j_max);
  PhiVariationReport r;
  r.strategy = strategy;
  const auto& v = path.values;
  for (int j = j_min; j <= j_max; ++j) {
    const std::uint64_t w = stride_for(path.grid, j);
    double s = 0.0;
    if (strategy == PartitionStrategy::badic_sweep) {
      s = level_sum(v, w, phi);
    } else {
      std::vector<std::uint64_t> pts{0, path.grid.intervals()};
      for (std::uint64_t lo = 0; lo < path.grid.intervals(); lo += w) {
        const auto first = v.begin() + static_cast<std::ptrdiff_t>(lo);
        const auto last = first + static_cast<std::ptrdiff_t>(w) + 1;
        const auto [mn, mx] = std::minmax_element(first, last);
        pts.push_back(static_cast<std::uint64_t>(mn - v.begin()));
        pts.push_back(static_cast<std::uint64_t>(mx - v.begin()));
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      CompensatedSum acc;
      for (std::size_t i = 1; i < pts.size(); ++i) acc.add(phi(std::abs(v[pts[i]] - v[pts[i - 1]])));
      s = acc.value();
    }
    r.levels.push_back(j);
    r.per_level.push_back(s);
    r.value = std::max(r.value, s);
  }
  return r;
}

ScalingReport phi_scaling(const PhiVariationReport& r, int b, std::string label) {
  ScalingReport s;
  s.regime_label = std::move(label);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    s.scales.push_back(std::pow(static_cast<double>(b), -r.levels[i]));
    s.stats.push_back(r.per_level[i]);
  }
  fit_report(s);
  return s;
}

std::string_view to_string(Normalizer n) {
  switch (n) {
    case Normalizer::sqrt_log: return "sqrt_log";
    case Normalizer::log: return "log";
    case Normalizer::sqrt_loglog: return "sqrt_loglog";
    case Normalizer::sqrt_log_loglog: return "sqrt_log_loglog";
    case Normalizer::power_K: return "power_K";
  }
  return "sqrt_log";
}

Normalizer parse_normalizer(std::string_view name) {
  for (auto n : kAllNormalizers) {
    if (name == to_string(n)) return n;
  }
  throw ParameterError(fmt::format("unknown normalizer '{}'", name));
}

double normalizer_eval(Normalizer n, double u, double hurst, double K) {
  const double lg = std::log(1.0 / u);
  const double uh = std::pow(u, hurst);
  switch (n) {
    case Normalizer::sqrt_log: return uh * std::sqrt(lg);
    case Normalizer::log: return uh * lg;
    case Normalizer::sqrt_loglog: return uh * std::sqrt(loglog_floored(u));
    case Normalizer::sqrt_log_loglog: return uh * std::sqrt(lg * loglog_floored(u));
    case Normalizer::power_K: return std::pow(u, K);
  }
  return uh;
}

Normalizer matched_uniform_normalizer(const ModelParams& params) {
  switch (params.regime()) {
    case Regime::subcritical: return Normalizer::sqrt_log;
    case Regime::critical: return Normalizer::log;
    case Regime::supercritical: return Normalizer::power_K;
  }
  return Normalizer::sqrt_log;
}

Normalizer matched_local_normalizer(const ModelParams& params) {
  switch (params.regime()) {
    case Regime::subcritical: return Normalizer::sqrt_loglog;
    case Regime::critical: return Normalizer::sqrt_log_loglog;
    case Regime::supercritical: return Normalizer::power_K;
  }
  return Normalizer::sqrt_loglog;
}

std::string_view to_string(ModulusMode m) { return m == ModulusMode::uniform ? "uniform" : "local"; }

ModulusMode parse_modulus_mode(std::string_view name) {
  if (name == "uniform") return ModulusMode::uniform;
  if (name == "local") return ModulusMode::local;
  throw ParameterError(fmt::format("unknown modulus mode '{}'", name));
}

ModulusReport modulus_profile(const PathSample& path, ModulusMode mode, Normalizer normalizer, double s, int j_min,
                              int j_max) {
  resolve_levels(path, j_min, j_max);
  if (j_min < 1) throw ParameterError("modulus scales start at level 1");
  const double hurst = path.params.hurst();
  const double K = path.params.K();
  const auto& v = path.values;
  const double n = static_cast<double>(path.grid.intervals());
  const std::uint64_t ks = mode == ModulusMode::local ? path.grid.index_of(s) : 0;
  ModulusReport r;
  r.series.regime_label = std::string(to_string(path.params.regime()));
  for (int j = j_min; j <= j_max; ++j) {
    const std::uint64_t w = stride_for(path.grid, j);
    const double h = static_cast<double>(w) / n;
    double ratio = 0.0;
    if (mode == ModulusMode::uniform) {
      ratio = sliding_range(v, w) / normalizer_eval(normalizer, h, hurst, K);
    } else {
      const std::uint64_t lo = ks >= w ? ks - w : 0;
      const std::uint64_t hi = std::min<std::uint64_t>(ks + w, path.grid.intervals());
      for (std::uint64_t k = lo; k <= hi; ++k) {
        if (k == ks) continue;
        const double u = static_cast<double>(k > ks ? k - ks : ks - k) / n;
        ratio = std::max(ratio, std::abs(v[k] - v[ks]) / normalizer_eval(normalizer, u, hurst, K));
      }
    }
    r.series.scales.push_back(h);
    r.series.stats.push_back(ratio);
  }
  fit_report(r.series);
  const std::size_t count = r.series.stats.size();
  for (std::size_t i = count >= 4 ? count - 4 : 0; i < count; ++i) r.tail_max = std::max(r.tail_max, r.series.stats[i]);
  return r;
}

ScalingReport box_dimension(const PathSample& path, int j_min, int j_max) {
  resolve_levels(path, j_min, j_max);
  const auto& v = path.values;
  ScalingReport r;
  r.regime_label = std::string(to_string(path.params.regime()));
  for (int j = j_min; j <= j_max; ++j) {
    const std::uint64_t w = stride_for(path.grid, j);
    const double inv_h = static_cast<double>(ipow_checked(static_cast<std::uint64_t>(path.grid.b()), j));
    double boxes = 0.0;
    for (std::uint64_t lo = 0; lo < path.grid.intervals(); lo += w) {
      const auto first = v.begin() + static_cast<std::ptrdiff_t>(lo);
      const auto [mn, mx] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(w) + 1);
      boxes += std::max(1.0, std::ceil((*mx - *mn) * inv_h));
    }
    r.scales.push_back(inv_h);
    r.stats.push_back(boxes);
  }
  fit_report(r);
  return r;
}

std::uint64_t leftmost_argmax(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("argmax of an empty path");
  return static_cast<std::uint64_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::vector<std::uint64_t> argmax_by_level(const PathSample& path, const std::vector<int>& levels) {
  std::vector<std::uint64_t> out;
  out.reserve(levels.size());
  for (int j : levels) {
    if (j < 0 || j > path.grid.level()) {
      throw ParameterError(fmt::format("level {} exceeds the path level {}", j, path.grid.level()));
    }
    const std::uint64_t w = stride_for(path.grid, j);
    std::uint64_t best = 0;
    for (std::uint64_t k = w; k < path.values.size(); k += w) {
      if (path.values[k] > path.values[best]) best = k;  // strict: first maximizer wins
    }
    out.push_back(best / w);
  }
  return out;
}

ArgmaxReport argmax_report(const std::vector<std::vector<std::uint64_t>>& per_path, int b,
                           const std::vector<int>& levels, int n_bins) {
  if (per_path.size() < 1000) throw ParameterError(fmt::format("argmax statistics need >= 1000 paths, got {}", per_path.size()));
  if (levels.empty()) throw ParameterError("argmax statistics need at least one level");
  if (n_bins < 2) throw ParameterError("argmax histogram needs at least 2 bins");
  ArgmaxReport r;
  r.n_paths = per_path.size();
  r.n_bins = n_bins;
  const double np = static_cast<double>(r.n_paths);
  std::size_t finest = 0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const std::uint64_t n = ipow_checked(static_cast<std::uint64_t>(b), levels[l]);
    std::vector<std::uint64_t> counts(n + 1, 0);
    for (const auto& p : per_path) ++counts.at(p.at(l));
    RefinementPoint pt;
    pt.level = levels[l];
    pt.max_cell_freq = static_cast<double>(*std::max_element(counts.begin(), counts.end())) / np;
    pt.atom_at_zero_freq = static_cast<double>(counts[0]) / np;
    r.refinement_series.push_back(pt);
    if (levels[l] > levels[finest]) finest = l;
  }
  r.atom_at_zero_freq = r.refinement_series[finest].atom_at_zero_freq;
  r.max_cell_freq = r.refinement_series[finest].max_cell_freq;

  const std::uint64_t n = ipow_checked(static_cast<std::uint64_t>(b), levels[finest]);
  r.histogram.assign(static_cast<std::size_t>(n_bins), 0);
  for (const auto& p : per_path) {
    const std::uint64_t bin = std::min<std::uint64_t>(p[finest] * static_cast<std::uint64_t>(n_bins) / n,
                                                      static_cast<std::uint64_t>(n_bins - 1));
    ++r.histogram[bin];
  }
  const double expected = np / n_bins;
  for (auto c : r.histogram) r.chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const boost::math::chi_squared dist(n_bins - 1);
  r.chi2_pvalue = boost::math::cdf(boost::math::complement(dist, r.chi2));
  return r;
}

ArgmaxReport argmax_distribution(const Ensemble& ensemble, const std::vector<int>& levels, int n_bins) {
  std::vector<std::vector<std::uint64_t>> per_path;
  per_path.reserve(ensemble.paths.size());
  for (const auto& p : ensemble.paths) per_path.push_back(argmax_by_level(p, levels));
  const int b = ensemble.paths.empty() ? 2 : ensemble.paths.front().grid.b();
  return argmax_report(per_path, b, levels, n_bins);
}

ArgmaxReport argmax_distribution(const PathSynthesizer& synth, std::size_t n_paths, std::uint64_t base_seed,
                                 const std::vector<int>& levels, int n_bins, unsigned threads) {
  const auto per_path =
      map_paths(synth, n_paths, base_seed, threads, [&](const PathSample& p) { return argmax_by_level(p, levels); });
  return argmax_report(per_path, synth.grid().b(), levels, n_bins);
}

std::vector<std::uint64_t> restricted_digits(std::uint64_t index, int N, int b, int depth) {
  const std::uint64_t base = ipow_checked(static_cast<std::uint64_t>(b), N / 2);
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(depth));
  for (int i = depth - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = index % base;
    index /= base;
  }
  return digits;
}

bool in_restricted_set(std::uint64_t index, int N, int b, int depth) {
  const int level = depth * N / 2;
  const std::uint64_t n = ipow_checked(static_cast<std::uint64_t>(b), level);
  const std::uint64_t margin = ipow_checked(static_cast<std::uint64_t>(b), level - N);
  std::uint64_t r = index % n;
  for (int k = 0; k <= (depth - 1) * N / 2; ++k) {
    if (r < margin || r > n - margin) return false;
    r = static_cast<std::uint64_t>((static_cast<u128>(r) * static_cast<unsigned>(b)) % n);
  }
  return true;
}

RestrictedPairs sample_restricted_pairs(int N, int b, int depth, std::size_t n_pairs, std::uint64_t seed) {
  if (N < 2 || N % 2 != 0) throw ParameterError(fmt::format("N must be even and >= 2, got {}", N));
  if (b < 2) throw ParameterError(fmt::format("b must be >= 2, got {}", b));
  if (depth < 2) throw ParameterError(fmt::format("depth must be >= 2, got {}", depth));
  const std::uint64_t base = ipow_checked(static_cast<std::uint64_t>(b), N / 2);
  if (base <= 3) throw ParameterError(fmt::format("b^(N/2) = {} leaves no admissible digits", base));
  const int level = depth * N / 2;
  if (static_cast<double>(level) * std::log2(static_cast<double>(b)) > 62.0) {
    throw ParameterError(fmt::format("b^{} exceeds 2^62", level));
  }
  RestrictedPairs out;
  out.N = N;
  out.b = b;
  out.depth = depth;
  out.level = level;
  RandomStream rs(seed);
  auto draw = [&]() {
    for (;;) {
      std::uint64_t x = 0;
      for (int i = 0; i < depth; ++i) x = x * base + 1 + rs.below(base - 2);
      if (in_restricted_set(x, N, b, depth)) return x;
      ++out.rejections;
    }
  };
  out.pairs.reserve(n_pairs);
  while (out.pairs.size() < n_pairs) {
    const std::uint64_t s = draw();
    const std::uint64_t t = draw();
    if (s == t) continue;
    out.pairs.emplace_back(std::min(s, t), std::max(s, t));
  }
  return out;
}

RestrictedBound restricted_lower_bound(const ModelParams& params, const RestrictedPairs& pairs, unsigned threads) {
  if (params.b() != pairs.b) throw ParameterError(fmt::format("pairs use b = {}, model b = {}", pairs.b, params.b()));
  if (pairs.pairs.empty()) throw ParameterError("no pairs");
  const BadicCovariance cov(params, pairs.level, false);
  const double n = static_cast<double>(cov.grid().intervals());
  const double two_k = 2.0 * params.K();
  std::vector<double> ratios(pairs.pairs.size());
  parallel_for(ratios.size(), threads, [&](std::size_t i) {
    const auto [s, t] = pairs.pairs[i];
    ratios[i] = cov.increment_variance(s, t) / std::pow(static_cast<double>(t - s) / n, two_k);
  });
  RestrictedBound r;
  r.pairs = ratios.size();
  r.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  r.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  return r;
}

QuasiHelixProfile quasi_helix_profile(const ModelParams& params, int n_min, int n_max, unsigned threads) {
  if (n_min < 1 || n_max < n_min + 2) throw ParameterError(fmt::format("need at least 3 levels, got [{}, {}]", n_min, n_max));
  QuasiHelixProfile q;
  const Regime regime = params.regime();
  q.normalization = regime == Regime::subcritical ? "h^2H" : regime == Regime::critical ? "h^2H log(1/h)" : "h^2K";
  std::vector<double> hs;
  for (int level = n_min; level <= n_max; ++level) {
    const BadicCovariance cov(params, level, true);
    const std::uint64_t n = cov.grid().intervals();
    const double h = 1.0 / static_cast<double>(n);
    double norm = std::pow(h, 2.0 * params.hurst());
    if (regime == Regime::critical) norm *= std::log(1.0 / h);
    if (regime == Regime::supercritical) norm = std::pow(h, 2.0 * params.K());
    std::vector<double> r(n);
    parallel_for(n, threads, [&](std::size_t k) { r[k] = cov.increment_variance(k, k + 1) / norm; });
    CompensatedSum acc;
    for (double x : r) acc.add(x);
    q.levels.push_back(level);
    hs.push_back(h);
    q.min_ratio.push_back(*std::min_element(r.begin(), r.end()));
    q.max_ratio.push_back(*std::max_element(r.begin(), r.end()));
    q.mean_ratio.push_back(acc.value() / static_cast<double>(n));
  }
  q.slope_min = fit_loglog(hs, q.min_ratio).slope;
  q.slope_mean = fit_loglog(hs, q.mean_ratio).slope;
  q.slope_max = fit_loglog(hs, q.max_ratio).slope;
  return q;
}

}  // namespace wwb
