#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "wwb/fgn.hpp"
#include "wwb/model.hpp"
#include "wwb/parallel.hpp"
#include "wwb/rng.hpp"

namespace wwb {

enum class ProcessKind { fbm, bridge, ww };

std::string_view to_string(ProcessKind p);
ProcessKind parse_process_kind(std::string_view name);

/// Largest grid (intervals) a path may live on.
inline constexpr std::uint64_t kMaxPathIntervals = std::uint64_t{1} << 22;

struct PathSample {
  GridSpec grid;
  std::vector<double> values;  // grid.points() entries
  ProcessKind process = ProcessKind::ww;
  ModelParams params;
  std::uint64_t seed = 0;
  SynthesisMethod method = SynthesisMethod::circulant;

  /// Restriction to the level-j sub-grid (every b^{n-j}-th point).  ParameterError if j > level.
  PathSample coarsened(int level) const;
};

/// Cumulative sum of increments, starting at 0.  The increment count must be b^n.
PathSample fbm_path(std::span<const double> increments, const ModelParams& params, std::uint64_t seed = 0,
                    SynthesisMethod method = SynthesisMethod::circulant);

/// B[j] = W[j] - kappa(t_j) W[last].  Both endpoints are exactly 0.
PathSample bridge_path(const PathSample& fbm, const ModelParams& params);

/// Y[k] = sum_{m<n} alpha^m B[(k b^m) mod b^n]: exact on the grid.
PathSample ww_path_from_bridge(const PathSample& bridge);

/// Reusable sampler for one (params, level, method, process).  Immutable and thread-safe.
class PathSynthesizer {
 public:
  PathSynthesizer(const ModelParams& params, int level, ProcessKind process = ProcessKind::ww,
                  SynthesisMethod method = SynthesisMethod::circulant);

  const GridSpec& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  ProcessKind process() const { return process_; }
  /// Method in use after a possible Cholesky fallback.
  SynthesisMethod method() const { return fgn_.method(); }

  PathSample sample(std::uint64_t seed) const;

 private:
  ModelParams params_;
  GridSpec grid_;
  ProcessKind process_;
  FgnGenerator fgn_;
  std::vector<double> kappa_;   // kappa(t_j)
  std::vector<double> powers_;  // alpha^m, m < level
};

PathSample ww_path(const ModelParams& params, int level, std::uint64_t seed,
                   SynthesisMethod method = SynthesisMethod::circulant);

struct Ensemble {
  std::vector<PathSample> paths;
  std::uint64_t base_seed = 0;
  std::size_t n_paths = 0;
};

/// Path i uses seed substream(base_seed, i).  Output does not depend on `threads`.
Ensemble make_ensemble(const ModelParams& params, int level, std::size_t n_paths, std::uint64_t base_seed,
                       unsigned threads = 0, ProcessKind process = ProcessKind::ww,
                       SynthesisMethod method = SynthesisMethod::circulant);

/// Streams the paths of make_ensemble through fn without keeping them; returns fn's
/// results in path order.
template <class Fn>
auto map_paths(const PathSynthesizer& synth, std::size_t n_paths, std::uint64_t base_seed, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const PathSample&>> {
  using R = std::invoke_result_t<Fn&, const PathSample&>;
  std::vector<std::optional<R>> slots(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) { slots[i].emplace(fn(synth.sample(substream(base_seed, i)))); });
  std::vector<R> out;
  out.reserve(n_paths);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// "t,value" rows with 17 significant digits.
void write_path_csv(std::ostream& os, const PathSample& path);

/// Binary block: "WWB1", u64 level, b, n_paths, seed, f64 H, alpha (little endian), then
/// the values of every path row-major.
struct PathBlock {
  std::uint64_t level = 0;
  std::uint64_t b = 0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  double hurst = 0.0;
  double alpha = 0.0;
  std::vector<double> values;
};

void write_wwb1(std::ostream& os, const Ensemble& ensemble);
/// ParameterError on a bad magic or truncated data.
PathBlock read_wwb1(std::istream& is);

}  // namespace wwb
