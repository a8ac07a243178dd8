#pragma once

#include <span>
#include <vector>

namespace wwb {

/// Signed indicator value * 1_{[lo,hi]}; lo > hi denotes -value * 1_{[hi,lo]}.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

/// Piecewise-constant function on [0, inf), zero outside its breakpoints, plus an
/// additive constant_part * 1_{[0,1]}.
///
/// Canonical form: breakpoints strictly increasing, one value per interval, adjacent
/// equal values merged, no zero pieces at either end.  Values on overlapping input
/// pieces are summed interval by interval (compensated, fixed order), so pieces that
/// cancel produce exact zeros.
class StepFunction {
 public:
  StepFunction() = default;

  /// Validates (strictly increasing, nonnegative breakpoints; values.size() ==
  /// breakpoints.size() - 1) and canonicalizes.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values, double constant_part = 0.0);

  static StepFunction from_pieces(std::span<const Piece> pieces, double constant_part = 0.0);
  static StepFunction indicator(double lo, double hi, double value = 1.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double constant_part() const { return constant_part_; }

  std::size_t piece_count() const { return values_.size(); }
  bool is_zero() const { return values_.empty() && constant_part_ == 0.0; }

  /// Same function with the constant absorbed into the pieces (constant_part() == 0).
  StepFunction folded() const;

  /// Nonzero pieces of folded(), left to right.
  std::vector<Piece> pieces() const;

  /// Value at x; at a breakpoint the value of the interval to its right.
  double operator()(double x) const;

  /// (integral of |f|^p)^{1/p}.
  double lp_norm(double p) const;

  /// Lebesgue measure of {f != 0}.
  double support_length() const;

  /// x -> f(x / c) for c > 0 (constant part must be zero).
  StepFunction rescaled(double c) const;

  StepFunction operator+(const StepFunction& other) const;
  StepFunction operator-(const StepFunction& other) const;
  StepFunction operator*(double scale) const;

 private:
  void canonicalize();

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double constant_part_ = 0.0;
};

}  // namespace wwb
