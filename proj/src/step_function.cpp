#include "wwb/step_function.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wwb/error.hpp"
#include "wwb/numeric.hpp"

namespace wwb {
namespace {

std::vector<Piece> raw_pieces(const StepFunction& f) {
  std::vector<Piece> out;
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out.push_back({bp[i], bp[i + 1], v[i]});
  }
  return out;
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values, double constant_part)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), constant_part_(constant_part) {
  if (breakpoints_.empty() && values_.empty()) return;
  if (breakpoints_.size() != values_.size() + 1) {
    throw ParameterError(fmt::format("step function needs {} values for {} breakpoints, got {}",
                                     breakpoints_.size() - 1, breakpoints_.size(), values_.size()));
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i]) || breakpoints_[i] < 0.0) {
      throw DomainError(fmt::format("breakpoint {} is negative or non-finite", breakpoints_[i]));
    }
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
      throw ParameterError("breakpoints must be strictly increasing");
    }
  }
  canonicalize();
}

StepFunction StepFunction::from_pieces(std::span<const Piece> pieces, double constant_part) {
  std::vector<Piece> norm;
  norm.reserve(pieces.size());
  for (const Piece& p : pieces) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.value)) {
      throw DomainError("non-finite piece");
    }
    Piece q = p.lo <= p.hi ? p : Piece{p.hi, p.lo, -p.value};
    if (q.lo < 0.0) throw DomainError(fmt::format("piece starts at negative abscissa {}", q.lo));
    if (q.hi > q.lo && q.value != 0.0) norm.push_back(q);
  }

  StepFunction f;
  f.constant_part_ = constant_part;
  if (norm.empty()) return f;

  std::vector<double> bp;
  bp.reserve(2 * norm.size());
  for (const Piece& p : norm) {
    bp.push_back(p.lo);
    bp.push_back(p.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  std::vector<double> vals(bp.size() - 1, 0.0);
  for (std::size_t e = 0; e + 1 < bp.size(); ++e) {
    CompensatedSum acc;
    for (const Piece& p : norm) {
      if (p.lo <= bp[e] && p.hi >= bp[e + 1]) acc.add(p.value);
    }
    vals[e] = acc.value();
  }
  f.breakpoints_ = std::move(bp);
  f.values_ = std::move(vals);
  f.canonicalize();
  return f;
}

StepFunction StepFunction::indicator(double lo, double hi, double value) {
  const Piece p{lo, hi, value};
  return from_pieces(std::span<const Piece>(&p, 1));
}

void StepFunction::canonicalize() {
  if (values_.empty()) {
    breakpoints_.clear();
    return;
  }
  // Merge runs of equal values.
  std::vector<double> starts;
  std::vector<double> vals;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!vals.empty() && values_[i] == vals.back()) continue;
    starts.push_back(breakpoints_[i]);
    vals.push_back(values_[i]);
  }
  double end = breakpoints_.back();
  while (!vals.empty() && vals.back() == 0.0) {
    end = starts.back();
    starts.pop_back();
    vals.pop_back();
  }
  std::size_t first = 0;
  while (first < vals.size() && vals[first] == 0.0) ++first;

  breakpoints_.assign(starts.begin() + static_cast<std::ptrdiff_t>(first), starts.end());
  values_.assign(vals.begin() + static_cast<std::ptrdiff_t>(first), vals.end());
  if (values_.empty()) {
    breakpoints_.clear();
  } else {
    breakpoints_.push_back(end);
  }
}

StepFunction StepFunction::folded() const {
  if (constant_part_ == 0.0) return *this;
  std::vector<Piece> p = raw_pieces(*this);
  p.push_back({0.0, 1.0, constant_part_});
  return from_pieces(p);
}

std::vector<Piece> StepFunction::pieces() const { return raw_pieces(folded()); }

double StepFunction::operator()(double x) const {
  const double c = (x >= 0.0 && x < 1.0) ? constant_part_ : 0.0;
  if (values_.empty() || x < breakpoints_.front() || x >= breakpoints_.back()) return c;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[idx] + c;
}

double StepFunction::lp_norm(double p) const {
  if (!(p > 0.0)) throw DomainError("L^p norm needs p > 0");
  CompensatedSum acc;
  for (const Piece& q : pieces()) acc.add(std::pow(std::abs(q.value), p) * (q.hi - q.lo));
  return std::pow(acc.value(), 1.0 / p);
}

double StepFunction::support_length() const {
  CompensatedSum acc;
  for (const Piece& q : pieces()) acc.add(q.hi - q.lo);
  return acc.value();
}

StepFunction StepFunction::rescaled(double c) const {
  if (!(c > 0.0)) throw DomainError("rescaling factor must be positive");
  if (constant_part_ != 0.0) throw ParameterError("cannot rescale a step function with a constant part");
  std::vector<double> bp = breakpoints_;
  for (double& x : bp) x *= c;
  return StepFunction(std::move(bp), values_);
}

StepFunction StepFunction::operator+(const StepFunction& other) const {
  std::vector<Piece> p = raw_pieces(*this);
  const std::vector<Piece> q = raw_pieces(other);
  p.insert(p.end(), q.begin(), q.end());
  return from_pieces(p, constant_part_ + other.constant_part_);
}

StepFunction StepFunction::operator-(const StepFunction& other) const { return *this + other * -1.0; }

StepFunction StepFunction::operator*(double scale) const {
  StepFunction f = *this;
  for (double& v : f.values_) v *= scale;
  f.constant_part_ *= scale;
  if (scale == 0.0) f = StepFunction();
  return f;
}

}  // namespace wwb
