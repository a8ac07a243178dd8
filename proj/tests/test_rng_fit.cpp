#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wwb/error.hpp"
#include "wwb/fit.hpp"
#include "wwb/rng.hpp"

using namespace wwb;

TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42), b(42), c(43), d(42, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CHECK(substream(7, 0) == substream(7, 0));
  CHECK(substream(7, 0) != substream(7, 1));
  CHECK(substream(7, 0) != substream(8, 0));
}

TEST_CASE("uniform and normal moments") {
  RandomStream rs(2024);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0, u = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rs.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
    const double v = rs.uniform();
    CHECK((v >= 0.0 && v < 1.0));
    u += v;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
  CHECK(std::abs(u / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));

  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rs.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK(rs.below(1) == 0);
}

TEST_CASE("fit_loglog") {
  std::vector<double> x, y2, yc;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(i);
    y2.push_back(i * i);
    yc.push_back(3.0);
  }
  const auto f = fit_loglog(x, y2);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fit_loglog(x, yc).slope == 0.0);

  // seeded multiplicative noise
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> xn, yn;
  for (int i = 0; i < 40; ++i) {
    const double xi = std::pow(2.0, i / 4.0);
    xn.push_back(xi);
    yn.push_back(std::pow(xi, 1.5) * (1.0 + 0.01 * nd(gen)));
  }
  CHECK(std::abs(fit_loglog(xn, yn).slope - 1.5) <= 0.02);

  std::vector<double> xs{1, 2, 3, 4}, ys2{1, -1, 9, 16};
  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1, 2, 3}, std::vector<double>{1, -1, 9}), FitError);
  CHECK(fit_loglog(xs, ys2).dropped == 1);
  CHECK(fit_loglog(xs, ys2).slope == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(fit_loglog(xs, std::vector<double>{1, 0, 9, std::nan("")}), FitError);
}
