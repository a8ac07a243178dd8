#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wwb/rng.hpp"

namespace wwb {

enum class SynthesisMethod { circulant, cholesky };

std::string_view to_string(SynthesisMethod m);
SynthesisMethod parse_synthesis_method(std::string_view name);

/// Largest Cholesky factorization attempted (points).
inline constexpr std::size_t kMaxCholeskyPoints = 4096;

/// Autocovariance of unit-spacing fGn: (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2.
double fgn_autocov(std::int64_t k, double hurst);

/// Fractional Gaussian noise on n increments of a unit interval, i.e. increments of fBm
/// over [k/n, (k+1)/n], with autocovariance fgn_autocov(k) * n^{-2H}.
///
/// Circulant mode embeds the first m+1 lags (m = next power of two >= n) in a circulant of
/// size 2m (Davies-Harte).  Negative eigenvalues are clipped at 0; if the clipped mass
/// exceeds 1e-10 of the total the generator falls back to Cholesky.  The generator is
/// immutable after construction and safe to share between threads.
class FgnGenerator {
 public:
  FgnGenerator(std::size_t n, double hurst, SynthesisMethod method = SynthesisMethod::circulant);

  std::size_t size() const { return n_; }
  double hurst() const { return hurst_; }
  /// Method actually used (after a possible fallback).
  SynthesisMethod method() const { return method_; }
  double clipped_mass() const { return clipped_mass_; }

  std::vector<double> sample(RandomStream& rs) const;

 private:
  std::size_t n_;
  double hurst_;
  SynthesisMethod method_;
  double clipped_mass_ = 0.0;
  std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / (2m)), circulant mode
  Eigen::MatrixXd chol_;           // lower factor, Cholesky mode
};

/// One-shot convenience wrapper.
std::vector<double> synth_fgn(std::size_t n, double hurst, std::uint64_t seed,
                              SynthesisMethod method = SynthesisMethod::circulant);

}  // namespace wwb
