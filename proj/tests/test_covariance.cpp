#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"

using namespace wwb;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

mp mp_pow(mp x, double e) { return x == 0 ? mp(0) : pow(abs(x), mp(e)); }

// 50-digit reference for the four-power formula.
double bilinear_ref(double a1, double b1, double a2, double b2, double h) {
  const mp A1(a1), B1(b1), A2(a2), B2(b2);
  const mp v = (mp_pow(B1 - A2, 2 * h) + mp_pow(A1 - B2, 2 * h) - mp_pow(B1 - B2, 2 * h) - mp_pow(A1 - A2, 2 * h)) / 2;
  return v.convert_to<double>();
}

// Brute-force double sum from the series definition: fractional parts tracked as exact
// integer numerators, bridge covariance from the real-valued kernel, long double sum.
long double series_cov(std::uint64_t i, std::uint64_t j, std::uint64_t n, const ModelParams& p, int terms) {
  long double total = 0;
  long double am = 1;
  std::uint64_t xi = i % n;
  for (int m = 0; m < terms; ++m, am *= p.alpha()) {
    long double amp = 1;
    std::uint64_t xj = j % n;
    for (int m2 = 0; m2 < terms; ++m2, amp *= p.alpha()) {
      total += am * amp * bridge_cov(static_cast<double>(xi) / n, static_cast<double>(xj) / n, p);
      xj = xj * p.b() % n;
    }
    xi = xi * p.b() % n;
  }
  return total;
}

}  // namespace

TEST_CASE("fbm_cov examples") {
  CHECK(fbm_cov(1, 1, 0.3) == 1.0);
  CHECK(fbm_cov(0.3, 0.7, 0.5) == doctest::Approx(0.3).epsilon(1e-15));
  const mp ref = (mp_pow(mp(0.25), 1.5) + mp_pow(mp(0.75), 1.5) - mp_pow(mp(0.5), 1.5)) / 2;
  CHECK(fbm_cov(0.25, 0.75, 0.75) == doctest::Approx(ref.convert_to<double>()).epsilon(1e-15));
  CHECK(fbm_cov(0.25, 0.75, 0.75) == doctest::Approx(0.2104828).epsilon(1e-6));
  for (double t : {0.1, 0.37, 0.5, 0.9}) CHECK(fbm_cov(t, t, 0.7) == std::pow(t, 1.4));
  CHECK_THROWS_AS(fbm_cov(-0.1, 0.5, 0.5), DomainError);
}

TEST_CASE("increment_bilinear examples") {
  CHECK(increment_bilinear(0, 1, 0, 1, 0.2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(increment_bilinear(0, 1, 1, 2, 0.5) == 0.0);
  CHECK(increment_bilinear(0, 1, 1, 2, 0.75) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-15));
  CHECK(increment_bilinear(0, 1, 1, 2, 0.75) == doctest::Approx(0.4142136).epsilon(1e-7));
  // orientation
  CHECK(increment_bilinear(1, 0, 1, 2, 0.75) == doctest::Approx(-0.4142136).epsilon(1e-7));
  CHECK(increment_bilinear(1, 0, 2, 1, 0.75) == doctest::Approx(0.4142136).epsilon(1e-7));
  CHECK(increment_bilinear(0.3, 0.3, 0, 1, 0.3) == 0.0);
}

TEST_CASE("increment_bilinear against 50-digit reference") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double h : {0.1, 0.3, 0.45, 0.6, 0.8, 0.95}) {
    for (int i = 0; i < 300; ++i) {
      // mix of overlapping, adjacent and far-apart short intervals
      const double scale = std::pow(10.0, -6.0 * u(gen));
      const double a1 = u(gen), a2 = u(gen) * 5.0;
      const double b1 = a1 + scale * u(gen), b2 = a2 + scale * u(gen);
      const double got = increment_bilinear(a1, b1, a2, b2, h);
      const double ref = bilinear_ref(a1, b1, a2, b2, h);
      const double mag = std::abs(bilinear_ref(a1, b1, a1, b1, h) * bilinear_ref(a2, b2, a2, b2, h));
      CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref) + 1e-15 * std::sqrt(mag));
    }
  }
}

TEST_CASE("far-field branch keeps relative accuracy") {
  // short intervals far apart: the four-power formula loses all digits here
  for (double h : {0.2, 0.3, 0.7, 0.9}) {
    for (double len : {1e-3, 1e-5, 1e-8}) {
      const double ref = bilinear_ref(0.0, len, 1.0, 1.0 + 0.5 * len, h);
      CHECK(increment_bilinear(0.0, len, 1.0, 1.0 + 0.5 * len, h) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("step_bilinear") {
  const auto one = StepFunction::indicator(0, 1);
  CHECK(step_bilinear(one, one, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(step_bilinear(one - one, one - one, 0.3) == 0.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_step = [&](int pieces) {
    std::vector<Piece> p;
    for (int i = 0; i < pieces; ++i) {
      const double a = 2.0 * u(gen), c = 2.0 * u(gen);
      p.push_back({a, c, 2.0 * u(gen) - 1.0});
    }
    return StepFunction::from_pieces(p, u(gen) < 0.5 ? 0.0 : u(gen) - 0.5);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_step(6), g = random_step(4), h = random_step(5);
    // H = 1/2 gives the L^2 inner product
    double l2 = 0.0;
    for (const Piece& q : f.pieces()) l2 += q.value * q.value * (q.hi - q.lo);
    CHECK(step_bilinear(f, f, 0.5) == doctest::Approx(l2).epsilon(1e-12));
    for (double hh : {0.25, 0.75}) {
      const double lhs = step_bilinear(f + g, h, hh);
      const double rhs = step_bilinear(f, h, hh) + step_bilinear(g, h, hh);
      const double scale = std::max({1.0, std::abs(step_bilinear(f, h, hh)), std::abs(step_bilinear(g, h, hh))});
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
      CHECK(step_bilinear(f, g, hh) == doctest::Approx(step_bilinear(g, f, hh)).epsilon(1e-14));
      CHECK(step_bilinear(f, f, hh) >= -1e-12);
    }
  }
}

TEST_CASE("bridge_cov") {
  const ModelParams brownian(0.5, 2, 0.5);
  CHECK(bridge_cov(1.0, 0.3, brownian) == 0.0);
  CHECK(bridge_cov(0.3, 0.0, brownian) == 0.0);
  CHECK(bridge_cov(0.3, 0.7, brownian) == doctest::Approx(0.09).epsilon(1e-14));
  const ModelParams p(0.7, 2, 0.75);
  CHECK(bridge_cov(0.3, 0.6, p) == bridge_cov(0.6, 0.3, p));
  // standard kappa conditions on W(1) = 0: Var = R(t,t) - R(t,1)^2 / R(1,1)
  const double r = fbm_cov(0.5, 1.0, 0.75);
  CHECK(bridge_cov(0.5, 0.5, p) == doctest::Approx(std::pow(0.5, 1.5) - r * r).epsilon(1e-14));
  CHECK_THROWS_AS(bridge_cov(1.2, 0.5, p), DomainError);
}

TEST_CASE("ww_cov exact examples") {
  const ModelParams p(0.5, 2, 0.5);
  CHECK(ww_cov(0.0, 0.25, p, 4) == 0.0);
  CHECK(ww_cov(1.0, 0.25, p, 4) == 0.0);
  for (double a : {0.2, 0.5, 0.9}) CHECK(ww_cov(0.5, 0.5, ModelParams(a, 2, 0.5), 3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ww_cov(0.25, 0.25, p, 2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(ww_cov(0.25, 0.25, p, 9) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK_THROWS_AS(ww_cov(0.3, 0.25, p, 4), ModeError);
}

TEST_CASE("ww_cov matches the brute-force series") {
  std::mt19937_64 gen(23);
  for (const ModelParams& p : {ModelParams(0.5, 2, 0.3), ModelParams(0.7, 2, 0.8), ModelParams(0.6, 3, 0.4),
                               ModelParams(0.5, 2, 0.6, {KappaVariant::linear})}) {
    const int level = 6;
    const auto n = ipow_checked(p.b(), level);
    for (int i = 0; i < 40; ++i) {
      const auto a = gen() % (n + 1), c = gen() % (n + 1);
      const double s = static_cast<double>(a) / n, t = static_cast<double>(c) / n;
      const long double ref = series_cov(a, c, n, p, level + 3);
      CHECK(ww_cov(s, t, p, level) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
      CHECK(ww_cov(s, t, p, level) == ww_cov(t, s, p, level));
    }
  }
}

TEST_CASE("truncated covariance respects its tail bound") {
  const ModelParams p(0.6, 2, 0.4);
  const double exact = ww_cov(0.375, 0.8125, p, 6);
  for (int m : {1, 2, 4, 8, 12}) {
    const auto tc = ww_cov_truncated(0.375, 0.8125, p, m);
    CHECK(std::abs(tc.value - exact) <= tc.tail_bound);
    CHECK(tc.terms == m);
  }
  // non-b-adic points: successive truncations agree within the bounds
  const auto coarse = ww_cov_truncated(0.3, 0.71, p, 10);
  const auto fine = ww_cov_truncated(0.3, 0.71, p, 40);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.tail_bound + fine.tail_bound);
  CHECK(fine.tail_bound < 1e-7);
  CHECK_THROWS_AS(ww_cov_truncated(0.3, 0.7, p, 0), ParameterError);
}

TEST_CASE("increment_step_repr") {
  const ModelParams p(0.5, 2, 0.3);
  CHECK(increment_step_repr(0.25, 0.25, p, 4).is_zero());
  CHECK(increment_step_repr(0.0, 1.0, p, 4).is_zero());
  CHECK_THROWS_AS(increment_step_repr(0.1, 0.25, p, 4), ModeError);
  for (int n : {3, 8, 12}) {
    const double t = std::ldexp(1.0, -n);
    const auto g = increment_step_repr(0.0, t, p, n);
    const double direct = ww_increment_variance(0.0, t, p, n);
    CHECK(step_bilinear(g, g, p.hurst()) == doctest::Approx(direct).epsilon(1e-10));
  }
  std::mt19937_64 gen(29);
  for (const ModelParams& q : {ModelParams(0.5, 2, 0.3), ModelParams(0.7, 2, 0.8), ModelParams::critical(2, 0.5),
                               ModelParams(0.4, 3, 0.6)}) {
    const int level = 7;
    const auto n = ipow_checked(q.b(), level);
    for (int i = 0; i < 50; ++i) {
      const double s = static_cast<double>(gen() % (n + 1)) / n, t = static_cast<double>(gen() % (n + 1)) / n;
      const auto g = increment_step_repr(s, t, q, level);
      const double v = ww_increment_variance(s, t, q, level);
      CHECK(std::abs(step_bilinear(g, g, q.hurst()) - v) <= 1e-9 * std::max(1.0, v));
    }
  }
}

TEST_CASE("ww_cov_matrix") {
  const ModelParams p(0.5, 2, 0.3);
  const auto small = ww_cov_matrix(GridSpec(1, 2), p);
  CHECK(small.entries.rows() == 3);
  CHECK(small.entries.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(small.entries.row(2).cwiseAbs().maxCoeff() == 0.0);

  for (double h : {0.3, 0.5, 0.7}) {
    const ModelParams q(0.6, 2, h);
    const GridSpec g(8, 2);
    const auto c = ww_cov_matrix(g, q, 4);
    for (std::uint64_t k = 0; k <= g.intervals(); k += 17) CHECK(c.entries(k, k) == ww_cov(g.point(k), g.point(k), q, 8));
    CHECK(c.asymmetry() == 0.0);
    const double floor = -1e-8 * c.entries.diagonal().maxCoeff();
    CHECK(c.min_eigenvalue() >= floor);
    CHECK(c.satisfies_invariants());
  }

  const auto one = ww_cov_matrix(GridSpec(5, 2), p, 1);
  const auto many = ww_cov_matrix(GridSpec(5, 2), p, 8);
  CHECK((one.entries.array() == many.entries.array()).all());

  CHECK_THROWS_AS(ww_cov_matrix(GridSpec(13, 2), p), ResourceError);
  CHECK_THROWS_AS(ww_cov_matrix(GridSpec(3, 3), p), ParameterError);

  std::ostringstream os;
  write_csv(os, small);
  CHECK(os.str().substr(0, 6) == "0,0,0\n");
}
