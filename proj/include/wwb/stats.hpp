#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wwb/model.hpp"
#include "wwb/paths.hpp"

namespace wwb {

/// Series of a statistic against scale, with an OLS fit of log(stat) on log(scale).
struct ScalingReport {
  std::vector<double> scales;
  std::vector<double> stats;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::string regime_label;
};

/// Fills slope/intercept/r_squared from scales and stats.  FitError with < 3 usable points.
void fit_report(ScalingReport& r);

/// S_j(p) = sum_k |f((k+1) b^-j) - f(k b^-j)|^p for j = 0..up_to_level; scales b^-j.
ScalingReport pvar_badic(const PathSample& path, double p, int up_to_level);

struct RoughnessEstimate {
  /// 1/2 (1 - log_b S_n(2) / n) at the finest level n.
  double gladyshev = 0.0;
  /// 1/2 (1 - slope of log_b S_j(2) on j), top 5 levels.
  double regression = 0.0;
  int level = 0;
};

/// EstimatorError for a flat path, ParameterError for level < 10.
RoughnessEstimate roughness_exponent(const PathSample& path);

enum class PhiVariant { subcritical, critical, supercritical_power, custom_power };

std::string_view to_string(PhiVariant v);
PhiVariant parse_phi_variant(std::string_view name);

/// Phi near 0.  LL(x) = max(log log(1/x), e).
///   subcritical          (x / sqrt(2 LL))^{1/H}
///   critical             (x / sqrt(2 log(1/x) LL / H))^{1/H}
///   supercritical_power  x^{1/K}
///   custom_power         x^power
/// The result is multiplied by log(1/x)^log_power (Theta variants).  Increments above x0
/// use the plain power envelope (x^{1/H}, x^{1/K} or x^power) without log factors.
struct PhiSpec {
  PhiVariant variant = PhiVariant::subcritical;
  double hurst = 0.5;
  double K = 1.0;
  double power = 2.0;
  int log_power = 0;
  double x0 = 0.1;

  /// Regime-matched Phi for params.
  static PhiSpec matched(const ModelParams& params);

  double operator()(double x) const;
};

enum class PartitionStrategy { badic_sweep, extrema_partition };

std::string_view to_string(PartitionStrategy s);
PartitionStrategy parse_partition_strategy(std::string_view name);

struct PhiVariationReport {
  PartitionStrategy strategy = PartitionStrategy::badic_sweep;
  std::vector<int> levels;
  std::vector<double> per_level;  // s_Phi of the level-j partition
  double value = 0.0;             // max over levels, a lower bound on v_Phi
};

/// badic_sweep: the partition {k b^-j}.  extrema_partition: for each level-j cell the
/// positions of its minimum and maximum on the full grid, plus 0 and 1.
/// Levels j_min..j_max; j_max < 0 means the path level.
PhiVariationReport phi_variation(const PathSample& path, const PhiSpec& phi, PartitionStrategy strategy,
                                 int j_min = 1, int j_max = -1);

/// Scaling view of a per-level series: scales b^-j.
ScalingReport phi_scaling(const PhiVariationReport& r, int b, std::string label = {});

enum class Normalizer { sqrt_log, log, sqrt_loglog, sqrt_log_loglog, power_K };

std::string_view to_string(Normalizer n);
Normalizer parse_normalizer(std::string_view name);
inline constexpr Normalizer kAllNormalizers[] = {Normalizer::sqrt_log, Normalizer::log, Normalizer::sqrt_loglog,
                                                Normalizer::sqrt_log_loglog, Normalizer::power_K};

/// u^H sqrt(log 1/u), u^H log 1/u, u^H sqrt(LL), u^H sqrt(log(1/u) LL), u^K; LL as in PhiSpec.
double normalizer_eval(Normalizer n, double u, double hurst, double K);

/// Regime-matched uniform normalizer (H<K: sqrt_log, H=K: log, H>K: power_K).
Normalizer matched_uniform_normalizer(const ModelParams& params);
/// Regime-matched local normalizer (H<K: sqrt_loglog, H=K: sqrt_log_loglog, H>K: power_K).
Normalizer matched_local_normalizer(const ModelParams& params);

enum class ModulusMode { uniform, local };

std::string_view to_string(ModulusMode m);
ModulusMode parse_modulus_mode(std::string_view name);

struct ModulusReport {
  ScalingReport series;  // scales b^-j, stats = sup ratio at that scale
  /// Max of the ratio over the finest 4 levels (limsup proxy).
  double tail_max = 0.0;
};

/// uniform: sup over |t-s| <= b^-j of |Y(t)-Y(s)| / omega(b^-j) (sliding window range).
/// local: sup over 0 < |t-s| <= b^-j of |Y(t)-Y(s)| / rho(|t-s|), s a grid point.
/// Levels j_min..j_max (j_max < 0: path level).
ModulusReport modulus_profile(const PathSample& path, ModulusMode mode, Normalizer normalizer, double s = 0.5,
                              int j_min = 1, int j_max = -1);

/// Column-wise box counts: for level j each cell of width h = b^-j covers
/// max(1, ceil((max - min) / h)) boxes.  scales are b^j (boxes per unit), so the fitted
/// slope is the dimension estimate.
ScalingReport box_dimension(const PathSample& path, int j_min, int j_max);

/// Smallest index of the maximum.
std::uint64_t leftmost_argmax(const std::vector<double>& values);

struct RefinementPoint {
  int level = 0;
  double max_cell_freq = 0.0;
  double atom_at_zero_freq = 0.0;
};

struct ArgmaxReport {
  std::size_t n_paths = 0;
  int n_bins = 0;
  /// Counts of tau over n_bins equal cells of [0,1], finest level.
  std::vector<std::uint64_t> histogram;
  double atom_at_zero_freq = 0.0;  // finest level
  double max_cell_freq = 0.0;      // largest mass on one grid point, finest level
  double chi2 = 0.0;               // uniformity statistic of the histogram
  double chi2_pvalue = 0.0;
  std::vector<RefinementPoint> refinement_series;
};

/// Leftmost argmax of path.coarsened(j) for each level j (as an index on that level).
std::vector<std::uint64_t> argmax_by_level(const PathSample& path, const std::vector<int>& levels);

/// Report from per-path argmax indices (argmax_by_level output).  ParameterError for
/// fewer than 1000 paths.
ArgmaxReport argmax_report(const std::vector<std::vector<std::uint64_t>>& per_path, int b,
                           const std::vector<int>& levels, int n_bins);

ArgmaxReport argmax_distribution(const Ensemble& ensemble, const std::vector<int>& levels, int n_bins = 20);

/// Streaming variant: paths are generated and dropped.
ArgmaxReport argmax_distribution(const PathSynthesizer& synth, std::size_t n_paths, std::uint64_t base_seed,
                                 const std::vector<int>& levels, int n_bins = 20, unsigned threads = 0);

/// b-adic pairs of S_N points x = sum_{i<=depth} xi_i B^-i, B = b^{N/2}, xi_i in {1..B-2}.
struct RestrictedPairs {
  int N = 0;
  int b = 2;
  int depth = 0;
  int level = 0;  // depth * N/2, the grid level of the points
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // grid indices, first < second
  std::size_t rejections = 0;
};

/// Digits of a level-(depth N/2) grid index in base b^{N/2}, most significant first.
std::vector<std::uint64_t> restricted_digits(std::uint64_t index, int N, int b, int depth);

/// {b^k x} in [b^-N, 1 - b^-N] for k = 0..(depth-1) N/2 (at least one full digit remains
/// after every shift), in exact integer arithmetic.
bool in_restricted_set(std::uint64_t index, int N, int b, int depth);

/// ParameterError if N is odd, b^{N/2} <= 3, depth < 2 or b^{depth N/2} > 2^62.
RestrictedPairs sample_restricted_pairs(int N, int b, int depth, std::size_t n_pairs, std::uint64_t seed);

struct RestrictedBound {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// E|Y(t)-Y(s)|^2 / |t-s|^{2K} over the pairs, exact covariance.
RestrictedBound restricted_lower_bound(const ModelParams& params, const RestrictedPairs& pairs, unsigned threads = 0);

struct QuasiHelixProfile {
  std::vector<int> levels;
  std::vector<double> min_ratio;
  std::vector<double> mean_ratio;
  std::vector<double> max_ratio;
  double slope_min = 0.0;
  double slope_mean = 0.0;
  double slope_max = 0.0;
  std::string normalization;
};

/// For each level n, E|Y((k+1)/N) - Y(k/N)|^2 / norm(1/N) over all k, N = b^n, exact
/// covariance.  norm(h) = h^{2H} (H<K), h^{2H} log(1/h) (H=K), h^{2K} (H>K).
/// Slopes are log-log fits against h.
QuasiHelixProfile quasi_helix_profile(const ModelParams& params, int n_min, int n_max, unsigned threads = 0);

}  // namespace wwb
