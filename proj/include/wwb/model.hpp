#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wwb {

/// Absolute tolerance used to decide H == K.
inline constexpr double kRegimeTolerance = 1e-12;

enum class KappaVariant { standard, linear };

/// Bridge-shape function kappa with kappa(0) = 0 and kappa(1) = 1.
///
/// standard: kappa(t) = (1 + t^{2H} - (1-t)^{2H}) / 2, which turns W_H - kappa W_H(1)
/// into fBm conditioned on W_H(1) = 0.  linear: kappa(t) = t.
struct KappaSpec {
  KappaVariant variant = KappaVariant::standard;

  friend bool operator==(const KappaSpec&, const KappaSpec&) = default;
};

std::string_view to_string(KappaVariant v);
KappaVariant parse_kappa_variant(std::string_view name);

/// Position of the Hurst exponent relative to the Weierstrass exponent K.
enum class Regime { subcritical, critical, supercritical };  // H<K, H=K, H>K

std::string_view to_string(Regime r);

/// min(1, -log_b(alpha)).  Throws ParameterError unless alpha in (0,1) and b > 1.
double derive_K(double alpha, double b);

/// Evaluates kappa at t in [0,1]; endpoints are exact.  Throws DomainError otherwise.
double kappa_eval(KappaSpec spec, double t, double hurst);

/// Model parameters (alpha, b, H, kappa) of the Wiener-Weierstrass bridge.
class ModelParams {
 public:
  ModelParams(double alpha, int b, double hurst, KappaSpec kappa = {});

  /// Critical case H == K: sets alpha = b^{-H}.
  static ModelParams critical(int b, double hurst, KappaSpec kappa = {});

  double alpha() const { return alpha_; }
  int b() const { return b_; }
  double hurst() const { return hurst_; }
  KappaSpec kappa_spec() const { return kappa_; }
  double K() const { return K_; }
  Regime regime() const;

  double kappa(double t) const { return kappa_eval(kappa_, t, hurst_); }

  /// Roughness exponent min(H, K) of the sample paths.
  double roughness() const { return hurst_ < K_ ? hurst_ : K_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  int b_;
  double hurst_;
  KappaSpec kappa_;
  double K_;
};

/// b^n with overflow checking (GridError on overflow).
std::uint64_t ipow_checked(std::uint64_t b, int n);

/// The b-adic grid {k b^{-n} : k = 0..b^n}.
class GridSpec {
 public:
  GridSpec(int level, int b);

  int level() const { return level_; }
  int b() const { return b_; }
  /// Number of intervals, b^n.  The grid has intervals() + 1 points.
  std::uint64_t intervals() const { return intervals_; }
  std::uint64_t points() const { return intervals_ + 1; }
  double point(std::uint64_t k) const { return static_cast<double>(k) / static_cast<double>(intervals_); }

  /// Index k with point(k) == t; ModeError if t is not on the grid.
  std::uint64_t index_of(double t) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int level_;
  int b_;
  std::uint64_t intervals_;
};

/// Grid index of {b^m * k b^{-n}}, i.e. (k b^m) mod b^n, in exact integer arithmetic.
/// k == b^n (the point 1) maps to 0.  Throws GridError for k outside [0, b^n].
std::uint64_t frac_index(std::int64_t k, std::int64_t m, int n, int b);

}  // namespace wwb
