#include "wwb/model.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wwb/error.hpp"
#include "wwb/numeric.hpp"

namespace wwb {

std::string_view to_string(KappaVariant v) {
  switch (v) {
    case KappaVariant::standard:
      return "standard";
    case KappaVariant::linear:
      return "linear";
  }
  return "unknown";
}

KappaVariant parse_kappa_variant(std::string_view name) {
  if (name == "standard") return KappaVariant::standard;
  if (name == "linear") return KappaVariant::linear;
  throw ParameterError(fmt::format("unknown kappa variant '{}'", name));
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::subcritical:
      return "H<K";
    case Regime::critical:
      return "H=K";
    case Regime::supercritical:
      return "H>K";
  }
  return "unknown";
}

double derive_K(double alpha, double b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError(fmt::format("alpha must lie in (0,1), got {}", alpha));
  if (!(b > 1.0) || !std::isfinite(b)) throw ParameterError(fmt::format("b must exceed 1, got {}", b));
  const double k = -std::log(alpha) / std::log(b);
  return k < 1.0 ? k : 1.0;
}

double kappa_eval(KappaSpec spec, double t, double hurst) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError(fmt::format("kappa evaluated outside [0,1] at t={}", t));
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  switch (spec.variant) {
    case KappaVariant::linear:
      return t;
    case KappaVariant::standard: {
      const double two_h = 2.0 * hurst;
      return 0.5 * (1.0 + std::pow(t, two_h) - std::pow(1.0 - t, two_h));
    }
  }
  return t;
}

ModelParams::ModelParams(double alpha, int b, double hurst, KappaSpec kappa)
    : alpha_(alpha), b_(b), hurst_(hurst), kappa_(kappa), K_(0.0) {
  if (b < 2) throw ParameterError(fmt::format("b must be an integer >= 2, got {}", b));
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));
  K_ = derive_K(alpha, static_cast<double>(b));
}

ModelParams ModelParams::critical(int b, double hurst, KappaSpec kappa) {
  if (b < 2) throw ParameterError(fmt::format("b must be an integer >= 2, got {}", b));
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));
  return ModelParams(std::pow(static_cast<double>(b), -hurst), b, hurst, kappa);
}

Regime ModelParams::regime() const {
  if (std::abs(hurst_ - K_) <= kRegimeTolerance) return Regime::critical;
  return hurst_ < K_ ? Regime::subcritical : Regime::supercritical;
}

std::uint64_t ipow_checked(std::uint64_t b, int n) {
  if (n < 0) throw GridError("negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) throw GridError(fmt::format("{}^{} overflows 64 bits", b, n));
    r *= b;
  }
  return r;
}

GridSpec::GridSpec(int level, int b) : level_(level), b_(b), intervals_(0) {
  if (level < 1) throw ParameterError(fmt::format("grid level must be >= 1, got {}", level));
  if (b < 2) throw ParameterError(fmt::format("grid base must be >= 2, got {}", b));
  intervals_ = ipow_checked(static_cast<std::uint64_t>(b), level);
  if (intervals_ > (std::uint64_t{1} << 53)) throw GridError("grid too fine for exact double coordinates");
}

std::uint64_t GridSpec::index_of(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw ModeError(fmt::format("point {} lies outside [0,1]", t));
  const double scaled = t * static_cast<double>(intervals_);
  const double k = std::nearbyint(scaled);
  if (std::abs(scaled - k) > 1e-9) {
    throw ModeError(fmt::format("point {} is not {}-adic of level {}", t, b_, level_));
  }
  return static_cast<std::uint64_t>(k);
}

std::uint64_t frac_index(std::int64_t k, std::int64_t m, int n, int b) {
  if (b < 2 || n < 0) throw GridError("invalid grid base or level");
  if (m < 0) throw GridError(fmt::format("negative shift m={}", m));
  const std::uint64_t modulus = ipow_checked(static_cast<std::uint64_t>(b), n);
  if (k < 0 || static_cast<std::uint64_t>(k) > modulus) {
    throw GridError(fmt::format("index {} outside [0, {}]", k, modulus));
  }
  if (m >= n) return 0;
  u128 acc = static_cast<u128>(static_cast<std::uint64_t>(k) % modulus);
  u128 base = static_cast<u128>(b) % modulus;
  auto e = static_cast<std::uint64_t>(m);
  while (e > 0) {
    if (e & 1U) acc = (acc * base) % modulus;
    base = (base * base) % modulus;
    e >>= 1U;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace wwb
