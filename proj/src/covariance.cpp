#include "wwb/covariance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "wwb/error.hpp"
#include "wwb/numeric.hpp"
#include "wwb/parallel.hpp"

namespace wwb {
namespace {

double pow2h(double x, double two_h) { return x == 0.0 ? 0.0 : std::pow(x, two_h); }

// Binomial expansion of the four-power formula around the midpoint distance d.
// With p = (h1+h2)/2, q = (h1-h2)/2:
//   value = h1 h2 d^{2H-2} sum_{j even >= 2} C(2H, j) E_j,
//   E_2 = 1, E_{j+2} = P E_j + Q^{j/2},  P = p^2/d^2, Q = q^2/d^2.
double far_field(double h1, double h2, double d, double hurst) {
  const double two_h = 2.0 * hurst;
  const double p = 0.5 * (h1 + h2) / d;
  const double q = 0.5 * (h1 - h2) / d;
  const double P = p * p;
  const double Q = q * q;
  double binom = two_h * (two_h - 1.0) / 2.0;  // C(2H, 2)
  double e = 1.0;
  double q_pow = Q;  // Q^{j/2} at the current j
  CompensatedSum acc;
  for (int j = 2; j < 200; j += 2) {
    const double term = binom * e;
    acc.add(term);
    if (std::abs(term) <= 1e-18 * std::abs(acc.value())) break;
    // advance binom from C(2H, j) to C(2H, j+2)
    binom *= (two_h - j) / (j + 1.0);
    binom *= (two_h - j - 1.0) / (j + 2.0);
    e = P * e + q_pow;
    q_pow *= Q;
  }
  return h1 * h2 * std::pow(d, two_h - 2.0) * acc.value();
}

}  // namespace

double fbm_cov(double s, double t, double hurst) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError(fmt::format("fBm covariance needs s,t >= 0, got ({}, {})", s, t));
  const double two_h = 2.0 * hurst;
  return 0.5 * (pow2h(s, two_h) + pow2h(t, two_h) - pow2h(std::abs(t - s), two_h));
}

double increment_bilinear(double a1, double b1, double a2, double b2, double hurst) {
  double sign = 1.0;
  if (b1 < a1) {
    std::swap(a1, b1);
    sign = -sign;
  }
  if (b2 < a2) {
    std::swap(a2, b2);
    sign = -sign;
  }
  const double h1 = b1 - a1;
  const double h2 = b2 - a2;
  if (h1 == 0.0 || h2 == 0.0) return 0.0;

  if (hurst == 0.5) {
    const double overlap = std::min(b1, b2) - std::max(a1, a2);
    return overlap > 0.0 ? sign * overlap : 0.0;
  }

  const double d = std::abs(0.5 * (a2 + b2) - 0.5 * (a1 + b1));
  if (h1 <= d / 8.0 && h2 <= d / 8.0) return sign * far_field(h1, h2, d, hurst);

  const double two_h = 2.0 * hurst;
  CompensatedSum acc;
  acc.add(pow2h(std::abs(b1 - a2), two_h));
  acc.add(pow2h(std::abs(a1 - b2), two_h));
  acc.add(-pow2h(std::abs(b1 - b2), two_h));
  acc.add(-pow2h(std::abs(a1 - a2), two_h));
  return sign * 0.5 * acc.value();
}

double step_bilinear(const StepFunction& f, const StepFunction& g, double hurst) {
  const std::vector<Piece> fp = f.pieces();
  const std::vector<Piece> gp = g.pieces();
  CompensatedSum acc;
  for (const Piece& x : fp) {
    for (const Piece& y : gp) acc.add(x.value * y.value * increment_bilinear(x.lo, x.hi, y.lo, y.hi, hurst));
  }
  return acc.value();
}

double bridge_cov(double s, double t, const ModelParams& params) {
  if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0)) {
    throw DomainError(fmt::format("bridge covariance needs s,t in [0,1], got ({}, {})", s, t));
  }
  if (s == 0.0 || s == 1.0 || t == 0.0 || t == 1.0) return 0.0;
  const double h = params.hurst();
  const double ks = params.kappa(s);
  const double kt = params.kappa(t);
  return fbm_cov(s, t, h) - (ks * fbm_cov(t, 1.0, h) + kt * fbm_cov(s, 1.0, h)) + ks * kt;
}

std::vector<double> alpha_powers(double alpha, int count) {
  std::vector<double> pw(static_cast<std::size_t>(std::max(count, 0)));
  double a = 1.0;
  for (auto& x : pw) {
    x = a;
    a *= alpha;
  }
  return pw;
}

BadicCovariance::BadicCovariance(const ModelParams& params, int level, bool tabulate)
    : params_(params), grid_(level, params.b()), two_h_(2.0 * params.hurst()), powers_(alpha_powers(params.alpha(), level)) {
  if (tabulate) {
    const std::uint64_t n = grid_.intervals();
    table_.resize(n + 1);
    for (std::uint64_t k = 0; k <= n; ++k) table_[k] = pow2h(grid_.point(k), two_h_);
  }
}

double BadicCovariance::pw(std::uint64_t k) const {
  return table_.empty() ? pow2h(grid_.point(k), two_h_) : table_[k];
}

double BadicCovariance::kappa(std::uint64_t k) const {
  const std::uint64_t n = grid_.intervals();
  if (k == 0) return 0.0;
  if (k == n) return 1.0;
  if (params_.kappa_spec().variant == KappaVariant::linear) return grid_.point(k);
  return 0.5 * (1.0 + pw(k) - pw(n - k));
}

double BadicCovariance::bridge(std::uint64_t i, std::uint64_t j) const {
  const std::uint64_t n = grid_.intervals();
  if (i == 0 || j == 0 || i == n || j == n) return 0.0;
  const double r = 0.5 * (pw(i) + pw(j) - pw(i > j ? i - j : j - i));
  const double ri = 0.5 * (pw(i) + 1.0 - pw(n - i));  // R(t_i, 1)
  const double rj = 0.5 * (pw(j) + 1.0 - pw(n - j));
  const double ki = kappa(i);
  const double kj = kappa(j);
  return r - (ki * rj + kj * ri) + ki * kj;
}

void BadicCovariance::fractions(std::uint64_t i, std::uint64_t* out) const {
  const std::uint64_t n = grid_.intervals();
  const auto b = static_cast<std::uint64_t>(grid_.b());
  std::uint64_t k = i % n;  // the point 1 has fractional part 0
  for (int m = 0; m < grid_.level(); ++m) {
    out[m] = k;
    k = static_cast<std::uint64_t>((static_cast<u128>(k) * b) % n);
  }
}

double BadicCovariance::cov(std::uint64_t i, std::uint64_t j) const {
  const std::uint64_t n = grid_.intervals();
  if (i > n || j > n) throw GridError(fmt::format("grid index ({}, {}) outside [0, {}]", i, j, n));
  if (i > j) std::swap(i, j);
  const int level = grid_.level();
  std::array<std::uint64_t, 64> fi{};  // level <= 53 since b^n <= 2^53
  std::array<std::uint64_t, 64> fj{};
  fractions(i, fi.data());
  fractions(j, fj.data());
  double total = 0.0;
  for (int m = 0; m < level; ++m) {
    if (fi[m] == 0) continue;
    double inner = 0.0;
    for (int mp = 0; mp < level; ++mp) {
      if (fj[mp] == 0) continue;
      inner += powers_[mp] * bridge(fi[m], fj[mp]);
    }
    total += powers_[m] * inner;
  }
  return total;
}

double BadicCovariance::increment_variance(std::uint64_t i, std::uint64_t j) const {
  return cov(i, i) + cov(j, j) - 2.0 * cov(i, j);
}

double ww_cov_index(std::uint64_t i, std::uint64_t j, const ModelParams& params, int level) {
  return BadicCovariance(params, level, false).cov(i, j);
}

double ww_cov(double s, double t, const ModelParams& params, int level) {
  const BadicCovariance c(params, level, false);
  return c.cov(c.grid().index_of(s), c.grid().index_of(t));
}

double ww_increment_variance(double s, double t, const ModelParams& params, int level) {
  const BadicCovariance c(params, level, false);
  return c.increment_variance(c.grid().index_of(s), c.grid().index_of(t));
}

TruncatedCovariance ww_cov_truncated(double s, double t, const ModelParams& params, int terms) {
  if (terms < 1) throw ParameterError("truncation needs at least one term");
  if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0)) {
    throw DomainError(fmt::format("covariance needs s,t in [0,1], got ({}, {})", s, t));
  }
  const auto pw = alpha_powers(params.alpha(), terms);
  const double b = params.b();
  std::vector<double> xs(static_cast<std::size_t>(terms));
  std::vector<double> xt(static_cast<std::size_t>(terms));
  double u = s;
  double v = t;
  for (int m = 0; m < terms; ++m) {
    xs[m] = u - std::floor(u);
    xt[m] = v - std::floor(v);
    u = b * xs[m];
    v = b * xt[m];
  }
  CompensatedSum acc;
  for (int m = 0; m < terms; ++m) {
    for (int mp = 0; mp < terms; ++mp) acc.add(pw[m] * pw[mp] * bridge_cov(xs[m], xt[mp], params));
  }
  // |bridge_cov| <= sup Var B_H <= (1 + sup|kappa|)^2 = 4; the omitted weights sum to
  // ((1 - (1-a^M)^2)) / (1-a)^2.
  const double a = params.alpha();
  const double am = std::pow(a, terms);
  const double bound = 4.0 * (2.0 * am - am * am) / ((1.0 - a) * (1.0 - a));
  return {acc.value(), bound, terms};
}

StepFunction increment_step_repr(double s, double t, const ModelParams& params, int level) {
  const GridSpec grid(level, params.b());
  const std::uint64_t i = grid.index_of(s);
  const std::uint64_t j = grid.index_of(t);
  const auto pw = alpha_powers(params.alpha(), level);
  std::vector<Piece> pieces;
  pieces.reserve(static_cast<std::size_t>(level));
  CompensatedSum constant;
  for (int m = 0; m < level; ++m) {
    const double xs = grid.point(frac_index(static_cast<std::int64_t>(i), m, level, params.b()));
    const double xt = grid.point(frac_index(static_cast<std::int64_t>(j), m, level, params.b()));
    if (xs == xt) continue;
    pieces.push_back({xs, xt, pw[m]});
    constant.add(-pw[m] * (params.kappa(xt) - params.kappa(xs)));
  }
  return StepFunction::from_pieces(pieces, constant.value());
}

double CovMatrix::asymmetry() const {
  const double scale = entries.size() == 0 ? 0.0 : entries.diagonal().cwiseAbs().maxCoeff();
  const double diff = entries.size() == 0 ? 0.0 : (entries - entries.transpose()).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

double CovMatrix::min_eigenvalue() const {
  if (entries.size() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition did not converge");
  return solver.eigenvalues().minCoeff();
}

bool CovMatrix::satisfies_invariants() const {
  if (entries.size() == 0) return true;
  const double max_diag = entries.diagonal().maxCoeff();
  return asymmetry() <= 1e-12 && min_eigenvalue() >= -1e-8 * max_diag;
}

CovMatrix ww_cov_matrix(const GridSpec& grid, const ModelParams& params, unsigned threads) {
  if (grid.b() != params.b()) throw ParameterError("grid base differs from the model base");
  if (grid.intervals() > kMaxCovarianceGrid) {
    throw ResourceError(fmt::format("covariance matrix limited to {} intervals, grid has {}", kMaxCovarianceGrid,
                                    grid.intervals()));
  }
  const BadicCovariance c(params, grid.level(), true);
  const auto n = static_cast<Eigen::Index>(grid.points());
  Eigen::MatrixXd m(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = c.cov(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) m(i, j) = m(j, i);
  }
  return CovMatrix{grid, params, std::move(m)};
}

void write_csv(std::ostream& os, const CovMatrix& cov) {
  const auto& e = cov.entries;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    std::string line;
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      if (j > 0) line += ',';
      line += fmt::format("{:.17g}", e(i, j));
    }
    line += '\n';
    os << line;
  }
}

}  // namespace wwb
