#include "wwb/fgn.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>
#include <fmt/format.h>

#include "wwb/error.hpp"

namespace wwb {
namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw ResourceError("fftw_alloc_complex failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Planning is not thread-safe in FFTW; executing an existing plan on new arrays is.
std::mutex g_plan_mutex;
std::map<std::size_t, fftw_plan> g_plans;

fftw_plan forward_plan(std::size_t n) {
  std::lock_guard lock(g_plan_mutex);
  if (auto it = g_plans.find(n); it != g_plans.end()) return it->second;
  FftwBuffer in(n), out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
  if (p == nullptr) throw NumericError(fmt::format("FFTW could not plan a transform of size {}", n));
  g_plans.emplace(n, p);
  return p;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1U;
  return m;
}

}  // namespace

std::string_view to_string(SynthesisMethod m) { return m == SynthesisMethod::circulant ? "circulant" : "cholesky"; }

SynthesisMethod parse_synthesis_method(std::string_view name) {
  if (name == "circulant") return SynthesisMethod::circulant;
  if (name == "cholesky") return SynthesisMethod::cholesky;
  throw ParameterError(fmt::format("unknown synthesis method '{}'", name));
}

double fgn_autocov(std::int64_t k, double hurst) {
  const double two_h = 2.0 * hurst;
  const auto p = [two_h](std::int64_t j) { return j == 0 ? 0.0 : std::pow(std::abs(static_cast<double>(j)), two_h); };
  return 0.5 * (p(k + 1) + p(k - 1) - 2.0 * p(k));
}

FgnGenerator::FgnGenerator(std::size_t n, double hurst, SynthesisMethod method)
    : n_(n), hurst_(hurst), method_(method) {
  if (n < 2) throw ParameterError(fmt::format("fGn needs at least 2 increments, got {}", n));
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError(fmt::format("H must lie in (0,1), got {}", hurst));

  if (method_ == SynthesisMethod::circulant) {
    const std::size_t m = next_pow2(n);
    const std::size_t nc = 2 * m;
    FftwBuffer c(nc), lambda(nc);
    for (std::size_t k = 0; k <= m; ++k) {
      c.data[k][0] = fgn_autocov(static_cast<std::int64_t>(k), hurst);
      c.data[k][1] = 0.0;
    }
    for (std::size_t k = m + 1; k < nc; ++k) {
      c.data[k][0] = c.data[nc - k][0];
      c.data[k][1] = 0.0;
    }
    fftw_execute_dft(forward_plan(nc), c.data, lambda.data);
    double total = 0.0;
    double clipped = 0.0;
    sqrt_eigen_.resize(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      const double l = lambda.data[k][0];
      total += std::abs(l);
      if (l < 0.0) clipped += -l;
      sqrt_eigen_[k] = l > 0.0 ? std::sqrt(l / static_cast<double>(nc)) : 0.0;
    }
    clipped_mass_ = total > 0.0 ? clipped / total : 0.0;
    if (clipped_mass_ > 1e-10) {
      sqrt_eigen_.clear();
      method_ = SynthesisMethod::cholesky;
    }
  }

  if (method_ == SynthesisMethod::cholesky) {
    if (n > kMaxCholeskyPoints) {
      throw ResourceError(fmt::format("Cholesky synthesis limited to {} points, asked for {}", kMaxCholeskyPoints, n));
    }
    const auto sz = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd cov(sz, sz);
    for (Eigen::Index i = 0; i < sz; ++i) {
      for (Eigen::Index j = 0; j < sz; ++j) cov(i, j) = fgn_autocov(i - j, hurst);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericError("fGn covariance is not positive definite");
    chol_ = llt.matrixL();
  }
}

std::vector<double> FgnGenerator::sample(RandomStream& rs) const {
  std::vector<double> out(n_);
  const double scale = std::pow(static_cast<double>(n_), -hurst_);
  if (method_ == SynthesisMethod::circulant) {
    const std::size_t nc = sqrt_eigen_.size();
    FftwBuffer w(nc), v(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      const double x = rs.normal();
      const double y = rs.normal();
      w.data[k][0] = sqrt_eigen_[k] * x;
      w.data[k][1] = sqrt_eigen_[k] * y;
    }
    fftw_execute_dft(forward_plan(nc), w.data, v.data);
    for (std::size_t j = 0; j < n_; ++j) out[j] = scale * v.data[j][0];
  } else {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n_));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rs.normal();
    const Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;
    for (std::size_t j = 0; j < n_; ++j) out[j] = scale * x(static_cast<Eigen::Index>(j));
  }
  return out;
}

std::vector<double> synth_fgn(std::size_t n, double hurst, std::uint64_t seed, SynthesisMethod method) {
  RandomStream rs(seed);
  return FgnGenerator(n, hurst, method).sample(rs);
}

}  // namespace wwb
