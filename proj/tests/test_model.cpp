#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "wwb/error.hpp"
#include "wwb/model.hpp"

using namespace wwb;
using boost::multiprecision::cpp_bin_float_50;

TEST_CASE("derive_K") {
  CHECK(derive_K(0.5, 2) == 1.0);
  CHECK(derive_K(0.25, 2) == 1.0);
  const cpp_bin_float_50 ref = -log(cpp_bin_float_50(7) / 10) / log(cpp_bin_float_50(2));
  CHECK(derive_K(0.7, 2) == doctest::Approx(ref.convert_to<double>()).epsilon(1e-15));
  CHECK(derive_K(0.7, 2) == doctest::Approx(0.5145731728).epsilon(1e-10));

  CHECK_THROWS_AS(derive_K(0.0, 2), ParameterError);
  CHECK_THROWS_AS(derive_K(1.0, 2), ParameterError);
  CHECK_THROWS_AS(derive_K(0.5, 1.0), ParameterError);
}

TEST_CASE("derive_K is nonincreasing in alpha and in b") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ua(0.01, 0.99);
  std::uniform_real_distribution<double> ub(1.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double a1 = ua(gen), a2 = ua(gen), b1 = ub(gen), b2 = ub(gen);
    const double lo_a = std::min(a1, a2), hi_a = std::max(a1, a2);
    const double lo_b = std::min(b1, b2), hi_b = std::max(b1, b2);
    CHECK(derive_K(lo_a, b1) >= derive_K(hi_a, b1));
    CHECK(derive_K(a1, lo_b) >= derive_K(a1, hi_b));  // -log a / log b shrinks as b grows
  }
}

TEST_CASE("kappa variants") {
  const KappaSpec standard{KappaVariant::standard};
  const KappaSpec linear{KappaVariant::linear};
  CHECK(kappa_eval(standard, 0.0, 0.3) == 0.0);
  CHECK(kappa_eval(standard, 1.0, 0.3) == 1.0);
  CHECK(kappa_eval(linear, 1.0, 0.3) == 1.0);
  CHECK(kappa_eval(standard, 0.5, 0.75) == 0.5);
  CHECK(kappa_eval(standard, 0.25, 0.5) == 0.25);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    CHECK(std::abs(kappa_eval(standard, t, 0.5) - kappa_eval(linear, t, 0.5)) <= 1e-15);
  }
  CHECK_THROWS_AS(kappa_eval(standard, -0.1, 0.5), DomainError);
  CHECK_THROWS_AS(kappa_eval(standard, 1.5, 0.5), DomainError);
  CHECK(parse_kappa_variant("linear") == KappaVariant::linear);
  CHECK_THROWS_AS(parse_kappa_variant("cubic"), ParameterError);
}

TEST_CASE("ModelParams regimes") {
  CHECK(ModelParams(0.5, 2, 0.3).regime() == Regime::subcritical);
  CHECK(ModelParams(0.7, 2, 0.8).regime() == Regime::supercritical);
  const auto crit = ModelParams::critical(2, 0.5);
  CHECK(crit.regime() == Regime::critical);
  CHECK(crit.alpha() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(ModelParams::critical(3, 0.37).regime() == Regime::critical);
  CHECK(ModelParams(0.7, 2, 0.8).roughness() == doctest::Approx(0.5145731728).epsilon(1e-9));
  CHECK(to_string(Regime::critical) == "H=K");

  CHECK_THROWS_AS(ModelParams(0.5, 1, 0.3), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, 2, 1.0), ParameterError);
  CHECK_THROWS_AS(ModelParams(1.5, 2, 0.3), ParameterError);
}

TEST_CASE("GridSpec") {
  const GridSpec g(3, 2);
  CHECK(g.intervals() == 8);
  CHECK(g.points() == 9);
  CHECK(g.point(3) == 0.375);
  CHECK(g.index_of(0.375) == 3);
  CHECK_THROWS_AS(g.index_of(0.3), ModeError);
  CHECK_THROWS_AS(GridSpec(0, 2), ParameterError);
  CHECK_THROWS_AS(GridSpec(70, 2), GridError);
  CHECK_THROWS_AS(ipow_checked(10, 20), GridError);
}

TEST_CASE("frac_index") {
  CHECK(frac_index(1, 1, 2, 2) == 2);
  CHECK(frac_index(3, 1, 2, 2) == 2);
  CHECK(frac_index(5, 4, 4, 3) == 0);
  CHECK(frac_index(5, 9, 4, 3) == 0);
  CHECK(frac_index(4, 0, 2, 2) == 0);  // the point 1
  CHECK_THROWS_AS(frac_index(5, 1, 2, 2), GridError);
  CHECK_THROWS_AS(frac_index(-1, 1, 2, 2), GridError);

  // large levels go through 128-bit products
  const std::int64_t k = (std::int64_t{1} << 40) + 3;
  CHECK(frac_index(k, 1, 41, 2) == 6);
  CHECK(frac_index(k, 3, 41, 2) == 24);

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int b = 2 + static_cast<int>(gen() % 5);
    const int n = 1 + static_cast<int>(gen() % 8);
    const auto N = static_cast<std::int64_t>(ipow_checked(b, n));
    const auto k0 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(N + 1));
    const int m1 = static_cast<int>(gen() % 10), m2 = static_cast<int>(gen() % 10);
    const auto once = static_cast<std::int64_t>(frac_index(k0, m1, n, b));
    CHECK(frac_index(once, m2, n, b) == frac_index(k0, m1 + m2, n, b));
  }
}
