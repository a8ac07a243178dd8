#include "wwb/paths.hpp"

#include <array>
#include <bit>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"

namespace wwb {
namespace {

int level_for(std::uint64_t intervals, int b) {
  std::uint64_t n = 1;
  for (int level = 0; level < 64; ++level) {
    if (n == intervals) return level;
    if (n > intervals / static_cast<std::uint64_t>(b)) break;
    n *= static_cast<std::uint64_t>(b);
  }
  throw GridError(fmt::format("{} increments is not a power of b = {}", intervals, b));
}

void check_size(const GridSpec& grid) {
  if (grid.intervals() > kMaxPathIntervals) {
    throw ResourceError(fmt::format("path grid b^n = {} exceeds the limit {}", grid.intervals(), kMaxPathIntervals));
  }
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffU);
  os.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), 8)) throw ParameterError("truncated WWB1 block");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

std::string_view to_string(ProcessKind p) {
  switch (p) {
    case ProcessKind::fbm: return "fbm";
    case ProcessKind::bridge: return "bridge";
    case ProcessKind::ww: return "ww";
  }
  return "ww";
}

ProcessKind parse_process_kind(std::string_view name) {
  if (name == "fbm") return ProcessKind::fbm;
  if (name == "bridge") return ProcessKind::bridge;
  if (name == "ww") return ProcessKind::ww;
  throw ParameterError(fmt::format("unknown process '{}'", name));
}

PathSample PathSample::coarsened(int level) const {
  if (level < 0 || level > grid.level()) {
    throw ParameterError(fmt::format("cannot coarsen a level-{} path to level {}", grid.level(), level));
  }
  GridSpec g(level, grid.b());
  const std::uint64_t step = grid.intervals() / g.intervals();
  std::vector<double> v(g.points());
  for (std::uint64_t k = 0; k < g.points(); ++k) v[k] = values[k * step];
  return PathSample{g, std::move(v), process, params, seed, method};
}

PathSample fbm_path(std::span<const double> increments, const ModelParams& params, std::uint64_t seed,
                    SynthesisMethod method) {
  GridSpec grid(level_for(increments.size(), params.b()), params.b());
  std::vector<double> w(grid.points());
  w[0] = 0.0;
  for (std::size_t j = 0; j < increments.size(); ++j) w[j + 1] = w[j] + increments[j];
  return PathSample{grid, std::move(w), ProcessKind::fbm, params, seed, method};
}

PathSample bridge_path(const PathSample& fbm, const ModelParams& params) {
  if (fbm.values.empty() || fbm.values.front() != 0.0) throw ParameterError("fBm path must start at 0");
  const auto& w = fbm.values;
  const std::uint64_t n = fbm.grid.intervals();
  const double last = w[n];
  std::vector<double> b(w.size());
  for (std::uint64_t j = 1; j < n; ++j) b[j] = w[j] - params.kappa(fbm.grid.point(j)) * last;
  b[0] = 0.0;
  b[n] = 0.0;
  return PathSample{fbm.grid, std::move(b), ProcessKind::bridge, params, fbm.seed, fbm.method};
}

PathSample ww_path_from_bridge(const PathSample& bridge) {
  const GridSpec& grid = bridge.grid;
  const std::uint64_t n = grid.intervals();
  const auto b = static_cast<std::uint64_t>(grid.b());
  const std::vector<double> powers = alpha_powers(bridge.params.alpha(), grid.level());
  std::vector<double> y(grid.points(), 0.0);
  for (std::uint64_t k = 1; k < n; ++k) {
    std::uint64_t idx = k;
    double acc = 0.0;
    for (int m = 0; m < grid.level(); ++m) {
      acc += powers[static_cast<std::size_t>(m)] * bridge.values[idx];
      idx = (idx * b) % n;
    }
    y[k] = acc;
  }
  return PathSample{grid, std::move(y), ProcessKind::ww, bridge.params, bridge.seed, bridge.method};
}

PathSynthesizer::PathSynthesizer(const ModelParams& params, int level, ProcessKind process, SynthesisMethod method)
    : params_(params),
      grid_(level, params.b()),
      process_(process),
      fgn_((check_size(grid_), static_cast<std::size_t>(grid_.intervals())), params.hurst(), method),
      kappa_(grid_.points()),
      powers_(alpha_powers(params.alpha(), level)) {
  for (std::uint64_t j = 0; j < grid_.points(); ++j) kappa_[j] = params_.kappa(grid_.point(j));
}

PathSample PathSynthesizer::sample(std::uint64_t seed) const {
  RandomStream rs(seed);
  const std::vector<double> inc = fgn_.sample(rs);
  const std::uint64_t n = grid_.intervals();
  std::vector<double> w(grid_.points());
  w[0] = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) w[j + 1] = w[j] + inc[j];
  if (process_ == ProcessKind::fbm) return PathSample{grid_, std::move(w), process_, params_, seed, method()};

  const double last = w[n];
  for (std::uint64_t j = 1; j < n; ++j) w[j] -= kappa_[j] * last;
  w[n] = 0.0;
  if (process_ == ProcessKind::bridge) return PathSample{grid_, std::move(w), process_, params_, seed, method()};

  const auto b = static_cast<std::uint64_t>(grid_.b());
  std::vector<double> y(grid_.points(), 0.0);
  for (std::uint64_t k = 1; k < n; ++k) {
    std::uint64_t idx = k;
    double acc = 0.0;
    for (double p : powers_) {
      acc += p * w[idx];
      idx *= b;
      while (idx >= n) idx -= n;  // idx < b n before the loop
    }
    y[k] = acc;
  }
  return PathSample{grid_, std::move(y), process_, params_, seed, method()};
}

PathSample ww_path(const ModelParams& params, int level, std::uint64_t seed, SynthesisMethod method) {
  return PathSynthesizer(params, level, ProcessKind::ww, method).sample(seed);
}

Ensemble make_ensemble(const ModelParams& params, int level, std::size_t n_paths, std::uint64_t base_seed,
                       unsigned threads, ProcessKind process, SynthesisMethod method) {
  if (n_paths < 1) throw ParameterError("an ensemble needs at least one path");
  const PathSynthesizer synth(params, level, process, method);
  Ensemble e;
  e.base_seed = base_seed;
  e.n_paths = n_paths;
  e.paths = map_paths(synth, n_paths, base_seed, threads, [](const PathSample& p) { return p; });
  return e;
}

void write_path_csv(std::ostream& os, const PathSample& path) {
  os << "t,value\n";
  for (std::uint64_t k = 0; k < path.grid.points(); ++k) {
    os << fmt::format("{:.17g},{:.17g}\n", path.grid.point(k), path.values[k]);
  }
}

void write_wwb1(std::ostream& os, const Ensemble& ensemble) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  const PathSample& first = ensemble.paths.front();
  os.write("WWB1", 4);
  put_u64(os, static_cast<std::uint64_t>(first.grid.level()));
  put_u64(os, static_cast<std::uint64_t>(first.grid.b()));
  put_u64(os, ensemble.paths.size());
  put_u64(os, ensemble.base_seed);
  put_u64(os, std::bit_cast<std::uint64_t>(first.params.hurst()));
  put_u64(os, std::bit_cast<std::uint64_t>(first.params.alpha()));
  for (const auto& p : ensemble.paths) {
    if (!(p.grid == first.grid)) throw ParameterError("ensemble paths live on different grids");
    for (double v : p.values) put_u64(os, std::bit_cast<std::uint64_t>(v));
  }
}

PathBlock read_wwb1(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), 4) || std::string_view(magic.data(), 4) != "WWB1") {
    throw ParameterError("not a WWB1 block");
  }
  PathBlock blk;
  blk.level = get_u64(is);
  blk.b = get_u64(is);
  blk.n_paths = get_u64(is);
  blk.seed = get_u64(is);
  blk.hurst = std::bit_cast<double>(get_u64(is));
  blk.alpha = std::bit_cast<double>(get_u64(is));
  const GridSpec grid(static_cast<int>(blk.level), static_cast<int>(blk.b));
  if (grid.intervals() > kMaxPathIntervals) throw ParameterError("WWB1 grid exceeds the size limit");
  const std::uint64_t count = blk.n_paths * grid.points();
  blk.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) blk.values[i] = std::bit_cast<double>(get_u64(is));
  return blk;
}

}  // namespace wwb
