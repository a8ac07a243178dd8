#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wwb/step_function.hpp"

namespace wwb {

/// Right-sided Riemann-Liouville integral I_-^beta(f)(x) of a step function, for
/// beta in (-1/2, 1/2) \ {0}:
///   (1/Gamma(beta+1)) sum_i v_i [((b_i-x)_+)^beta - ((a_i-x)_+)^beta].
/// The value is 0 from the right end of the support on; for beta < 0 it is +infinity at
/// any other breakpoint.  DomainError for other beta.
double rl_apply(const StepFunction& f, double beta, double x);

/// C_H such that the L^2 norm of C_H I_-^{H-1/2}(1_{[0,1]}) is 1, by quadrature.  Cached.
double calibrate_norm_constant(double hurst);

enum class NormMode { isometry, quadrature };

std::string_view to_string(NormMode m);
NormMode parse_norm_mode(std::string_view name);

/// ||M_-^H f||^2_{L^2}.  Isometry mode is the exact bilinear form; quadrature mode
/// integrates (C_H I^beta f)^2 segment by segment (double-exponential rules, splitting
/// at every breakpoint).  NumericError if the quadrature misses 1e-6 relative accuracy.
double ml_norm_sq(const StepFunction& f, double hurst, NormMode mode = NormMode::isometry);

struct HardyLittlewood {
  double ratio = 0.0;        // ||M f||^2 / ||f||^2_{L^{1/H}}
  bool direction_ok = false; // ratio finite and positive
};

/// Ratio of the two sides of the Hardy-Littlewood inequality.  ParameterError for f = 0.
HardyLittlewood hardy_littlewood_check(const StepFunction& f, double hurst);

struct HLCorpusReport {
  double hurst = 0.0;
  std::size_t n_functions = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// The bound being tested: min ratio (floor) for H <= 1/2, max ratio (ceiling) otherwise.
  double bound = 0.0;
  /// Same bound on the first half of the corpus.
  double bound_half = 0.0;
  bool direction_ok = false;
  /// bound and bound_half within a factor 2.
  bool stable = false;
};

/// Random step function with `pieces` pieces on [0, 4) (seeded, per-item substream).
StepFunction random_step_function(std::uint64_t seed, int pieces);

/// Hardy-Littlewood ratios over a seeded corpus of random step functions.
HLCorpusReport hardy_littlewood_sweep(double hurst, std::size_t n_functions, int pieces, std::uint64_t seed,
                                      unsigned threads = 0);

enum class FamilyStrategy { contiguous, random_gap, adversarial_nested };

std::string_view to_string(FamilyStrategy s);
FamilyStrategy parse_family_strategy(std::string_view name);

/// Collection I_0..I_{M-1} of k-intervals with |I_m| = b^m, b = alpha^{-1/H}.
struct KIntervalFamily {
  int k = 1;
  double alpha = 0.5;
  double hurst = 0.5;
  double b = 4.0;
  FamilyStrategy strategy = FamilyStrategy::contiguous;
  std::vector<std::vector<std::pair<double, double>>> intervals;

  /// g_M = sum_{m<M} alpha^m 1_{I_m} for M <= intervals.size().
  StepFunction g(int M) const;
};

/// contiguous: I_m packed left to right.  random_gap: each I_m split into at most k
/// pieces separated by random gaps, levels left to right.  adversarial_nested: I_m =
/// (0, b^m), all levels stacked at the origin.
KIntervalFamily make_homogeneous_family(int k, double alpha, double hurst, int M, FamilyStrategy strategy,
                                        std::uint64_t seed);

struct HLReport {
  FamilyStrategy strategy = FamilyStrategy::contiguous;
  int k = 1;
  double alpha = 0.5;
  double hurst = 0.5;
  std::vector<int> M_values;
  std::vector<double> norms_sq;
  double slope = 0.0;
  double const_lo = 0.0;
  double const_hi = 0.0;
  /// ||g_M||^2_{L^{1/H}} per M (the classical Hardy-Littlewood right-hand side).
  std::vector<double> lp_norms_sq;
  double lp_slope = 0.0;
};

/// norms_sq for M = 1..M_max of one family per strategy (isometry mode).
std::vector<HLReport> hls_sweep(int k, double alpha, double hurst, const std::vector<FamilyStrategy>& strategies,
                                int M_max, std::uint64_t seed);

/// Disjoint union of open intervals.
using IntervalSet = std::vector<std::pair<double, double>>;

/// <1_I, h> for h >= 0 supported in I and H < 1/2.  ParameterError on a support
/// violation, a negative h, or H outside (0, 1/2).
double l1_positivity_check(const IntervalSet& I, const StepFunction& h, double hurst);

struct PositivityReport {
  std::size_t cases = 0;
  double min_value = 0.0;
  std::size_t below_tolerance = 0;  // values < -1e-12
};

/// Seeded corpus: I with at most 5 intervals, h with at most 10 pieces inside I.
PositivityReport positivity_sweep(double hurst, std::size_t n_cases, std::uint64_t seed);

}  // namespace wwb
