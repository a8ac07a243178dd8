#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"
#include "wwb/fgn.hpp"
#include "wwb/paths.hpp"

using namespace wwb;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(x.size() - 1);
  return m;
}

}  // namespace

TEST_CASE("fgn autocovariance") {
  CHECK(fgn_autocov(0, 0.7) == 1.0);
  CHECK(fgn_autocov(1, 0.5) == 0.0);
  CHECK(fgn_autocov(5, 0.5) == 0.0);
  CHECK(fgn_autocov(1, 0.75) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-15));
  CHECK(fgn_autocov(-3, 0.3) == fgn_autocov(3, 0.3));
}

TEST_CASE("fgn H=1/2 increments are uncorrelated") {
  const std::size_t n = std::size_t{1} << 16;
  const auto x = synth_fgn(n, 0.5, 11);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) den += x[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) num += x[i] * x[i + 1];
  CHECK(std::abs(num / den) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fgn variance and lag-1 covariance") {
  const std::size_t n = 64;
  const std::size_t paths = 10000;
  for (auto method : {SynthesisMethod::circulant, SynthesisMethod::cholesky}) {
    for (double h : {0.3, 0.75}) {
      const FgnGenerator gen(n, h, method);
      CHECK(gen.method() == method);
      std::vector<double> sq(paths), prod(paths);
      for (std::size_t p = 0; p < paths; ++p) {
        RandomStream rs(substream(99, p));
        const auto x = gen.sample(rs);
        sq[p] = x[17] * x[17];
        prod[p] = x[40] * x[41];
      }
      const double var = std::pow(1.0 / static_cast<double>(n), 2.0 * h);
      const auto msq = moments(sq);
      CHECK(std::abs(msq.mean - var) <= 3.0 * std::sqrt(msq.var / paths));
      const double g1 = fgn_autocov(1, h) * var;
      const auto mprod = moments(prod);
      CHECK(std::abs(mprod.mean - g1) <= 3.0 * std::sqrt(mprod.var / paths));
    }
  }
}

TEST_CASE("fgn generator limits") {
  CHECK(FgnGenerator(1000, 0.9).clipped_mass() <= 1e-10);
  CHECK_THROWS_AS(FgnGenerator(5000, 0.5, SynthesisMethod::cholesky), ResourceError);
  CHECK_THROWS_AS(FgnGenerator(1, 0.5), ParameterError);
  CHECK_THROWS_AS(FgnGenerator(16, 1.0), ParameterError);
  CHECK(parse_synthesis_method("cholesky") == SynthesisMethod::cholesky);
  CHECK_THROWS_AS(parse_synthesis_method("fft"), ParameterError);
  CHECK(synth_fgn(256, 0.3, 5) == synth_fgn(256, 0.3, 5));
  CHECK(synth_fgn(256, 0.3, 5) != synth_fgn(256, 0.3, 6));
}

TEST_CASE("fbm and bridge paths") {
  const ModelParams params(0.5, 2, 0.5);
  SUBCASE("zero endpoint realization") {
    std::vector<double> inc{0.3, -0.1, 0.5, -0.7};
    const auto w = fbm_path(inc, params);
    CHECK(w.grid.level() == 2);
    CHECK(w.values.back() == 0.0);
    const auto br = bridge_path(w, params);
    CHECK(br.values == w.values);
  }
  SUBCASE("linear kappa pins the end") {
    const ModelParams lin(0.5, 2, 0.7, KappaSpec{KappaVariant::linear});
    const auto w = fbm_path(synth_fgn(1024, 0.7, 3), lin);
    const auto br = bridge_path(w, lin);
    CHECK(br.values.front() == 0.0);
    CHECK(br.values.back() == 0.0);
    CHECK(br.values[512] == w.values[512] - 0.5 * w.values.back());
  }
  CHECK_THROWS_AS(fbm_path(std::vector<double>(6, 0.0), params), GridError);
}

TEST_CASE("bridge covariance by simulation") {
  // b = 10 puts 0.3 and 0.7 on the level-1 grid
  const ModelParams params(0.5, 10, 0.5);
  const PathSynthesizer synth(params, 1, ProcessKind::bridge);
  const std::size_t paths = 20000;
  const auto prod = map_paths(synth, paths, 2024, 0, [](const PathSample& p) { return p.values[3] * p.values[7]; });
  const auto m = moments(prod);
  CHECK(std::abs(m.mean - 0.09) <= 3.0 * std::sqrt(m.var / paths));
}

TEST_CASE("ww paths") {
  const ModelParams params(0.5, 2, 0.5);
  SUBCASE("pinned") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto y = ww_path(params, 10, seed);
      CHECK(y.values.front() == 0.0);
      CHECK(y.values.back() == 0.0);
      CHECK(y.values.size() == 1025);
    }
  }
  SUBCASE("level 1 equals the bridge") {
    const ModelParams p3(0.6, 3, 0.4);
    const auto y = PathSynthesizer(p3, 1, ProcessKind::ww).sample(8);
    const auto br = PathSynthesizer(p3, 1, ProcessKind::bridge).sample(8);
    CHECK(y.values == br.values);
  }
  SUBCASE("superposition from the bridge") {
    const ModelParams p3(0.6, 3, 0.4);
    const auto br = PathSynthesizer(p3, 5, ProcessKind::bridge).sample(8);
    const auto y = PathSynthesizer(p3, 5, ProcessKind::ww).sample(8);
    const auto z = ww_path_from_bridge(br);
    CHECK(z.values == y.values);
    // direct check of one grid value
    const std::uint64_t k = 100;
    double expect = 0.0;
    double a = 1.0;
    for (int m = 0; m < 5; ++m, a *= 0.6) expect += a * br.values[frac_index(static_cast<std::int64_t>(k), m, 5, 3)];
    CHECK(y.values[k] == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("variance at 1/4") {
    const PathSynthesizer synth(params, 2);
    const std::size_t paths = 20000;
    const auto sq = map_paths(synth, paths, 77, 0, [](const PathSample& p) { return p.values[1] * p.values[1]; });
    const auto m = moments(sq);
    CHECK(BadicCovariance(params, 2, false).cov(1, 1) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(std::abs(m.mean - 0.375) <= 3.0 * std::sqrt(m.var / paths));
  }
  SUBCASE("size limit") {
    CHECK_THROWS_AS(PathSynthesizer(params, 23), ResourceError);
  }
  SUBCASE("coarsening") {
    const auto y = ww_path(params, 8, 4);
    const auto c = y.coarsened(5);
    CHECK(c.grid.level() == 5);
    CHECK(c.values.size() == 33);
    CHECK(c.values[3] == y.values[24]);
    CHECK_THROWS_AS(y.coarsened(9), ParameterError);
  }
}

TEST_CASE("ensembles") {
  const ModelParams params(0.7, 2, 0.8);
  const auto one = make_ensemble(params, 6, 1, 123);
  CHECK(one.paths[0].values == ww_path(params, 6, substream(123, 0)).values);

  const auto e1 = make_ensemble(params, 8, 64, 5, 1);
  const auto e8 = make_ensemble(params, 8, 64, 5, 8);
  bool same = true;
  for (std::size_t i = 0; i < 64; ++i) same = same && e1.paths[i].values == e8.paths[i].values;
  CHECK(same);
  CHECK_THROWS_AS(make_ensemble(params, 4, 0, 1), ParameterError);
}

TEST_CASE("ensemble mean is centered") {
  const ModelParams params(0.5, 2, 0.3);
  const int level = 6;
  const std::size_t paths = 10000;
  const PathSynthesizer synth(params, level);
  const auto all = map_paths(synth, paths, 31, 0, [](const PathSample& p) { return p.values; });
  const BadicCovariance cov(params, level, true);
  double max_var = 0.0;
  for (std::uint64_t k = 0; k <= 64; ++k) max_var = std::max(max_var, cov.cov(k, k));
  double max_mean = 0.0;
  for (std::size_t k = 0; k <= 64; ++k) {
    double s = 0.0;
    for (const auto& v : all) s += v[k];
    max_mean = std::max(max_mean, std::abs(s / paths));
  }
  CHECK(max_mean <= 4.0 * std::sqrt(max_var / paths));
}

TEST_CASE("path export") {
  const ModelParams params(0.5, 3, 0.6);
  const auto e = make_ensemble(params, 3, 4, 9);
  std::stringstream bin;
  write_wwb1(bin, e);
  CHECK(bin.str().size() == 4 + 6 * 8 + 4 * 28 * 8);
  CHECK(bin.str().substr(0, 4) == "WWB1");
  const auto blk = read_wwb1(bin);
  CHECK(blk.level == 3);
  CHECK(blk.b == 3);
  CHECK(blk.n_paths == 4);
  CHECK(blk.seed == 9);
  CHECK(blk.hurst == 0.6);
  CHECK(blk.alpha == 0.5);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 28; ++k) CHECK(blk.values[i * 28 + k] == e.paths[i].values[k]);
  }
  std::stringstream bad("WWB2xxxx");
  CHECK_THROWS_AS(read_wwb1(bad), ParameterError);
  std::stringstream trunc(bin.str().substr(0, 30));
  CHECK_THROWS_AS(read_wwb1(trunc), ParameterError);

  std::stringstream csv;
  write_path_csv(csv, e.paths[0]);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,value");
  std::getline(csv, line);
  CHECK(line == "0,0");
}
