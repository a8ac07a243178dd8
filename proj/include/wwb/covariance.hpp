#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "wwb/model.hpp"
#include "wwb/step_function.hpp"

namespace wwb {

/// Largest grid (in intervals) accepted by ww_cov_matrix.
inline constexpr std::uint64_t kMaxCovarianceGrid = 4096;

/// fBm covariance R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 for s,t >= 0.
double fbm_cov(double s, double t, double hurst);

/// E[(W_H(b1)-W_H(a1)) (W_H(b2)-W_H(a2))], with [c,d] read as -[d,c] when d < c.
///
/// Far-apart short intervals (both lengths <= 1/8 of the midpoint distance) are
/// evaluated by the binomial series around the midpoint distance, which avoids the
/// cancellation of the four-power formula.
double increment_bilinear(double a1, double b1, double a2, double b2, double hurst);

/// <f, g> = E[(int f dW_H)(int g dW_H)] for step functions (constants folded in).
double step_bilinear(const StepFunction& f, const StepFunction& g, double hurst);

/// Covariance of the bridge B_H = W_H - kappa W_H(1) on [0,1]^2.  Exactly zero when s
/// or t is 0 or 1.
double bridge_cov(double s, double t, const ModelParams& params);

/// c(s,t) = E[Y(s) Y(t)] for b-adic points s, t of level <= n (exact finite double sum).
/// Throws ModeError for non-b-adic input.
double ww_cov(double s, double t, const ModelParams& params, int level);

/// Same as ww_cov for grid indices of the level-n grid.
double ww_cov_index(std::uint64_t i, std::uint64_t j, const ModelParams& params, int level);

/// E|Y(t) - Y(s)|^2 via the double-sum covariance (c(t,t) + c(s,s) - 2 c(s,t)).
double ww_increment_variance(double s, double t, const ModelParams& params, int level);

/// Repeated exact covariance evaluation on one grid.  With `tabulate`, the 2H-powers of
/// all grid points are precomputed (O(b^n) memory); values are bitwise identical to
/// ww_cov_index either way.
class BadicCovariance {
 public:
  BadicCovariance(const ModelParams& params, int level, bool tabulate);

  const GridSpec& grid() const { return grid_; }
  double cov(std::uint64_t i, std::uint64_t j) const;
  double increment_variance(std::uint64_t i, std::uint64_t j) const;

  /// Bridge covariance between grid points i/N and j/N.
  double bridge(std::uint64_t i, std::uint64_t j) const;

 private:
  double pw(std::uint64_t k) const;
  double kappa(std::uint64_t k) const;
  void fractions(std::uint64_t i, std::uint64_t* out) const;

  ModelParams params_;
  GridSpec grid_;
  double two_h_;
  std::vector<double> powers_;  // alpha^m, m < level
  std::vector<double> table_;   // (k/N)^{2H}, empty unless tabulated
};

struct TruncatedCovariance {
  double value = 0.0;
  /// Rigorous bound on |c(s,t) - value|.
  double tail_bound = 0.0;
  int terms = 0;
};

/// Covariance at arbitrary s,t in [0,1], truncating the series after `terms` levels.
TruncatedCovariance ww_cov_truncated(double s, double t, const ModelParams& params, int terms);

/// g with Y(t) - Y(s) = int_0^1 g dW_H for b-adic s, t of level n:
/// sum_m alpha^m 1_{[{b^m s},{b^m t}]} with constant part -sum_m alpha^m (kappa({b^m t}) - kappa({b^m s})).
StepFunction increment_step_repr(double s, double t, const ModelParams& params, int level);

/// Exact covariance of Y on a b-adic grid.
struct CovMatrix {
  GridSpec grid;
  ModelParams params;
  Eigen::MatrixXd entries;

  /// Largest |C - C^T| relative to the largest diagonal entry.
  double asymmetry() const;
  /// Smallest eigenvalue of the symmetric matrix.
  double min_eigenvalue() const;
  /// Symmetric and min eigenvalue >= -1e-8 * max diagonal.
  bool satisfies_invariants() const;
};

/// Assembles the (b^n + 1)^2 covariance matrix; entries are bitwise independent of
/// `threads`.  ResourceError above kMaxCovarianceGrid intervals.
CovMatrix ww_cov_matrix(const GridSpec& grid, const ModelParams& params, unsigned threads = 0);

/// Row-major CSV with 17 significant digits, no header.
void write_csv(std::ostream& os, const CovMatrix& cov);

/// Powers 1, alpha, alpha^2, ... by repeated multiplication (shared by every module
/// that sums the Weierstrass series, so all of them agree bitwise).
std::vector<double> alpha_powers(double alpha, int count);

}  // namespace wwb
