#include "wwb/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wwb/covariance.hpp"
#include "wwb/error.hpp"
#include "wwb/fractional.hpp"
#include "wwb/paths.hpp"
#include "wwb/rng.hpp"
#include "wwb/stats.hpp"

namespace wwb {
namespace {

std::uint64_t seed_for(const CheckOptions& o, int check, int item) {
  return substream(o.seed, static_cast<std::uint64_t>(check) * 1000 + static_cast<std::uint64_t>(item));
}

std::string slug(const ModelParams& p) { return fmt::format("a{:.4g}_b{}_H{:.4g}", p.alpha(), p.b(), p.hurst()); }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Averages per-level series of equal length.
std::vector<double> average_series(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
  }
  for (double& x : out) x /= static_cast<double>(rows.size());
  return out;
}

// 1: increment variance through the step-function isometry vs the covariance double sum.
CheckResult check_isometry(const CheckOptions& o) {
  CheckResult r;
  const double tol = o.tol("isometry", "rel_tol", 1e-9);
  const int level = 8;
  const std::vector<ModelParams> sets{ModelParams(0.5, 2, 0.3), ModelParams(0.5, 2, 0.5), ModelParams(0.7, 2, 0.8),
                                      ModelParams::critical(2, 0.5)};
  std::vector<double> col_set, col_s, col_t, col_iso, col_cov, col_err;
  double worst = 0.0;
  json per = json::array();
  for (std::size_t idx = 0; idx < sets.size(); ++idx) {
    const auto& p = sets[idx];
    const BadicCovariance cov(p, level, true);
    const std::uint64_t n = cov.grid().intervals();
    RandomStream rs(seed_for(o, 1, static_cast<int>(idx)));
    double set_worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      std::uint64_t i = rs.below(n + 1);
      std::uint64_t j = rs.below(n + 1);
      while (j == i) j = rs.below(n + 1);
      if (i > j) std::swap(i, j);
      const double s = cov.grid().point(i);
      const double t = cov.grid().point(j);
      const StepFunction g = increment_step_repr(s, t, p, level);
      const double iso = step_bilinear(g, g, p.hurst());
      const double dbl = cov.increment_variance(i, j);
      const double err = std::abs(iso - dbl) / (dbl != 0.0 ? std::abs(dbl) : 1.0);
      set_worst = std::max(set_worst, err);
      col_set.push_back(static_cast<double>(idx));
      col_s.push_back(s);
      col_t.push_back(t);
      col_iso.push_back(iso);
      col_cov.push_back(dbl);
      col_err.push_back(err);
    }
    worst = std::max(worst, set_worst);
    per.push_back({{"params", to_json(p)}, {"max_rel_err", set_worst}});
  }
  r.passed = worst <= tol;
  r.measured = {{"max_rel_err", worst}, {"sets", per}};
  r.tolerance = {{"rel_tol", tol}};
  r.summary = fmt::format("max rel err {:.3g} over 4x200 pairs (tol {:.0e})", worst, tol);
  r.artifacts.push_back({"pairs", "csv",
                         columns_csv({"set", "s", "t", "isometry", "double_sum", "rel_err"},
                                     {col_set, col_s, col_t, col_iso, col_cov, col_err})});
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 2: ||M^{1/2} f||^2 = ||f||_2^2.
CheckResult check_hl(const CheckOptions& o) {
  CheckResult r;
  const double tol = o.tol("hl", "rel_tol", 1e-12);
  std::vector<double> lhs, rhs, err;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const StepFunction f = random_step_function(seed_for(o, 2, i), 8);
    const double a = ml_norm_sq(f, 0.5, NormMode::isometry);
    const double l2 = f.lp_norm(2.0);
    const double b = l2 * l2;
    lhs.push_back(a);
    rhs.push_back(b);
    err.push_back(std::abs(a - b) / b);
    worst = std::max(worst, err.back());
  }
  r.passed = worst <= tol;
  r.measured = {{"max_rel_err", worst}, {"functions", 100}};
  r.tolerance = {{"rel_tol", tol}};
  r.summary = fmt::format("max rel err {:.3g} on 100 functions (tol {:.0e})", worst, tol);
  r.artifacts.push_back({"corpus", "csv", columns_csv({"ml_norm_sq", "l2_norm_sq", "rel_err"}, {lhs, rhs, err})});
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 3: norm^2 of the homogeneous family grows linearly in M.
CheckResult check_hls(const CheckOptions& o) {
  CheckResult r;
  const double lo = o.tol("hls", "slope_lo", 0.85);
  const double hi = o.tol("hls", "slope_hi", 1.15);
  const double drift = o.tol("hls", "const_drift", 0.10);
  struct Case {
    int k;
    double alpha;
    double hurst;
  };
  const std::vector<Case> cases{{1, 0.5, 0.5}, {2, 0.7, 0.3}, {3, 0.9, 0.8}};
  const std::vector<FamilyStrategy> strategies{FamilyStrategy::contiguous, FamilyStrategy::random_gap,
                                               FamilyStrategy::adversarial_nested};
  bool ok = true;
  json rows = json::array();
  std::vector<std::string> failures;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& cs = cases[c];
    const std::uint64_t seed = seed_for(o, 3, static_cast<int>(c));
    const auto full = hls_sweep(cs.k, cs.alpha, cs.hurst, strategies, 24, seed);
    const auto part = hls_sweep(cs.k, cs.alpha, cs.hurst, strategies, 16, seed);
    json reports = json::array();
    for (std::size_t s = 0; s < full.size(); ++s) {
      const double r24 = full[s].const_hi / full[s].const_lo;
      const double r16 = part[s].const_hi / part[s].const_lo;
      const double change = std::abs(r24 / r16 - 1.0);
      const bool slope_ok = full[s].slope >= lo && full[s].slope <= hi;
      const bool const_ok = change < drift;
      ok = ok && slope_ok && const_ok;
      if (!slope_ok || !const_ok) {
        failures.push_back(fmt::format("({},{},{}) {}", cs.k, cs.alpha, cs.hurst, to_string(full[s].strategy)));
      }
      rows.push_back({{"k", cs.k},
                      {"alpha", cs.alpha},
                      {"H", cs.hurst},
                      {"strategy", to_string(full[s].strategy)},
                      {"slope", full[s].slope},
                      {"const_ratio_16", r16},
                      {"const_ratio_24", r24},
                      {"const_ratio_change", change},
                      {"slope_ok", slope_ok},
                      {"const_ok", const_ok}});
      reports.push_back(to_json(full[s]));
      r.artifacts.push_back({fmt::format("norms_k{}_{}", cs.k, to_string(full[s].strategy)), "csv",
                             columns_csv({"M", "norm_sq", "lp_norm_sq"},
                                         {std::vector<double>(full[s].M_values.begin(), full[s].M_values.end()),
                                          full[s].norms_sq, full[s].lp_norms_sq})});
    }
    r.artifacts.push_back({fmt::format("reports_k{}", cs.k), "json", dump(reports)});
  }
  r.passed = ok;
  r.measured = {{"rows", rows}};
  r.tolerance = {{"slope", {lo, hi}}, {"const_ratio_change", drift}};
  r.summary = ok ? "all 9 families: slope in range, constants stable"
                 : fmt::format("{}/9 families out of tolerance", failures.size());
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 4: the L^{1/H} bound grows like M^{2H} while the true norm grows like M.
CheckResult check_hls_lp(const CheckOptions& o) {
  CheckResult r;
  const double lp_tol = o.tol("hls-lp", "lp_slope_tol", 0.05);
  const double slope_tol = o.tol("hls-lp", "slope_tol", 0.15);
  const double hurst = 0.3;
  const auto rep = hls_sweep(1, 0.7, hurst, {FamilyStrategy::contiguous}, 24, seed_for(o, 4, 0)).front();
  const bool lp_ok = std::abs(rep.lp_slope - 2.0 * hurst) <= lp_tol;
  const bool slope_ok = std::abs(rep.slope - 1.0) <= slope_tol;
  r.passed = lp_ok && slope_ok;
  r.measured = {{"lp_slope", rep.lp_slope}, {"slope", rep.slope}, {"lp_ok", lp_ok}, {"slope_ok", slope_ok}};
  r.tolerance = {{"lp_slope", {2.0 * hurst, lp_tol}}, {"slope", {1.0, slope_tol}}};
  r.summary = fmt::format("lp slope {:.4f} (0.6+-{}), norm slope {:.4f} (1+-{})", rep.lp_slope, lp_tol, rep.slope, slope_tol);
  r.artifacts.push_back({"report", "json", dump(to_json(rep))});
  r.artifacts.push_back({"norms", "csv",
                         columns_csv({"M", "norm_sq", "lp_norm_sq"},
                                     {std::vector<double>(rep.M_values.begin(), rep.M_values.end()), rep.norms_sq,
                                      rep.lp_norms_sq})});
  return r;
}

// 5: <1_I, h> >= 0 for H < 1/2.
CheckResult check_positivity(const CheckOptions& o) {
  CheckResult r;
  const double floor = -o.tol("positivity", "neg_tol", 1e-12);
  bool ok = true;
  json rows = json::array();
  double worst = 0.0;
  int idx = 0;
  for (double h : {0.1, 0.3, 0.45}) {
    const auto rep = positivity_sweep(h, 1000, seed_for(o, 5, idx++));
    ok = ok && rep.min_value >= floor;
    worst = std::min(worst, rep.min_value);
    json j = to_json(rep);
    j["H"] = h;
    rows.push_back(j);
  }
  r.passed = ok;
  r.measured = {{"sweeps", rows}, {"min_value", worst}};
  r.tolerance = {{"min_value", floor}};
  r.summary = fmt::format("min value {:.3g} over 3x1000 cases", worst);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 6: two-sided increment bounds from exact covariance.
CheckResult check_quasi_helix(const CheckOptions& o) {
  CheckResult r;
  const double tol = o.tol("quasi-helix", "slope_tol", 0.05);
  const std::vector<ModelParams> sets{ModelParams(0.5, 2, 0.3), ModelParams::critical(2, 0.5)};
  bool ok = true;
  json rows = json::array();
  std::vector<std::string> parts;
  for (const auto& p : sets) {
    const auto q = quasi_helix_profile(p, 3, 12, o.threads);
    const bool this_ok = std::abs(q.slope_min) <= tol && std::abs(q.slope_max) <= tol;
    ok = ok && this_ok;
    json j = to_json(q);
    j["params"] = to_json(p);
    j["ok"] = this_ok;
    rows.push_back(j);
    parts.push_back(fmt::format("{}: min {:.3f} max {:.3f} (mean {:.3f})", to_string(p.regime()), q.slope_min,
                                q.slope_max, q.slope_mean));
    std::vector<double> levels(q.levels.begin(), q.levels.end());
    r.artifacts.push_back({"profile_" + slug(p), "csv",
                           columns_csv({"level", "min_ratio", "mean_ratio", "max_ratio"},
                                       {levels, q.min_ratio, q.mean_ratio, q.max_ratio})});
  }
  r.passed = ok;
  r.measured = {{"profiles", rows}};
  r.tolerance = {{"abs_slope", tol}, {"statistics", {"min_ratio", "max_ratio"}}};
  r.summary = fmt::format("log-slopes {}; {} (tol {})", parts[0], parts[1], tol);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 7: restricted lower bound on S_N pairs, H > K.
CheckResult check_tn(const CheckOptions& o) {
  CheckResult r;
  const double factor = o.tol("tn", "stability_factor", 2.0);
  const ModelParams p(std::pow(2.0, -0.55), 2, 0.6);
  const int N = 4;
  const int depth = 10;
  const auto small = sample_restricted_pairs(N, 2, depth, 1000, seed_for(o, 7, 0));
  const auto large = sample_restricted_pairs(N, 2, depth, 10000, seed_for(o, 7, 1));
  const auto bs = restricted_lower_bound(p, small, o.threads);
  const auto bl = restricted_lower_bound(p, large, o.threads);
  const double ratio = std::max(bs.min_ratio, bl.min_ratio) / std::min(bs.min_ratio, bl.min_ratio);
  r.passed = bs.min_ratio > 0.0 && bl.min_ratio > 0.0 && ratio <= factor;
  r.measured = {{"params", to_json(p)},
                {"N", N},
                {"depth", depth},
                {"pairs_1e3", to_json(bs)},
                {"pairs_1e4", to_json(bl)},
                {"rejections", {small.rejections, large.rejections}},
                {"min_ratio_change", ratio}};
  r.tolerance = {{"min_ratio", "> 0"}, {"stability_factor", factor}};
  r.summary = fmt::format("min ratio {:.4g} (1e3 pairs), {:.4g} (1e4 pairs), factor {:.3f}", bs.min_ratio, bl.min_ratio, ratio);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 8: empirical covariance of simulated paths vs the exact matrix.
CheckResult check_cov_mc(const CheckOptions& o) {
  CheckResult r;
  const double zmax = o.tol("cov-mc", "z_max", 5.0);
  const int level = 6;
  const std::size_t paths = 50000;
  bool ok = true;
  json rows = json::array();
  int idx = 0;
  std::vector<std::string> parts;
  for (double h : {0.3, 0.5, 0.75}) {
    const ModelParams p(0.5, 2, h);
    const PathSynthesizer synth(p, level);
    const auto vals = map_paths(synth, paths, seed_for(o, 8, idx++), o.threads, [](const PathSample& s) { return s.values; });
    const CovMatrix exact = ww_cov_matrix(synth.grid(), p, o.threads);
    const auto n = static_cast<Eigen::Index>(synth.grid().points());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (const auto& v : vals) {
      const Eigen::Map<const Eigen::VectorXd> x(v.data(), n);
      acc.selfadjointView<Eigen::Upper>().rankUpdate(x);
    }
    acc /= static_cast<double>(paths);
    double worst = 0.0;
    std::vector<double> ci, cj, emp, ex, zs;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        const double c = exact.entries(i, j);
        const double se = std::sqrt((exact.entries(i, i) * exact.entries(j, j) + c * c) / static_cast<double>(paths));
        const double diff = std::abs(acc(i, j) - c);
        const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        worst = std::max(worst, z);
        ci.push_back(static_cast<double>(i));
        cj.push_back(static_cast<double>(j));
        emp.push_back(acc(i, j));
        ex.push_back(c);
        zs.push_back(z);
      }
    }
    ok = ok && worst <= zmax;
    rows.push_back({{"params", to_json(p)}, {"max_z", worst}, {"paths", paths}});
    parts.push_back(fmt::format("H={} max z {:.2f}", h, worst));
    r.artifacts.push_back({"entries_" + slug(p), "csv", columns_csv({"i", "j", "empirical", "exact", "z"}, {ci, cj, emp, ex, zs})});
  }
  r.passed = ok;
  r.measured = {{"runs", rows}};
  r.tolerance = {{"z_max", zmax}};
  r.summary = fmt::format("{}; {}; {} (tol {} se)", parts[0], parts[1], parts[2], zmax);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 9: Gladyshev estimate of min(H, K).
CheckResult check_roughness(const CheckOptions& o) {
  CheckResult r;
  const double tol = o.tol("roughness", "abs_tol", 0.05);
  const std::vector<ModelParams> sets{ModelParams(0.5, 2, 0.3), ModelParams::critical(2, 0.5), ModelParams(0.7, 2, 0.8)};
  bool ok = true;
  json rows = json::array();
  std::vector<std::string> parts;
  int idx = 0;
  for (const auto& p : sets) {
    const PathSynthesizer synth(p, 14);
    const auto est = map_paths(synth, 100, seed_for(o, 9, idx++), o.threads,
                               [](const PathSample& s) { return roughness_exponent(s); });
    std::vector<double> g, reg;
    for (const auto& e : est) {
      g.push_back(e.gladyshev);
      reg.push_back(e.regression);
    }
    const double mg = mean(g);
    const bool this_ok = std::abs(mg - p.roughness()) <= tol;
    ok = ok && this_ok;
    rows.push_back({{"params", to_json(p)},
                    {"target", p.roughness()},
                    {"gladyshev_mean", mg},
                    {"regression_mean", mean(reg)},
                    {"ok", this_ok}});
    parts.push_back(fmt::format("{} {:.4f} vs {:.4f}", to_string(p.regime()), mg, p.roughness()));
    r.artifacts.push_back({"estimates_" + slug(p), "csv", columns_csv({"gladyshev", "regression"}, {g, reg})});
  }
  r.passed = ok;
  r.measured = {{"regimes", rows}};
  r.tolerance = {{"abs_tol", tol}};
  r.summary = fmt::format("{}; {}; {} (tol {})", parts[0], parts[1], parts[2], tol);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 10: box dimension max(2-H, 2-K); cases with K <= 2H-1 are informational.
CheckResult check_dimension(const CheckOptions& o) {
  CheckResult r;
  const double tol = o.tol("dimension", "abs_tol", 0.1);
  const std::vector<ModelParams> sets{ModelParams(0.5, 2, 0.4), ModelParams(0.7, 2, 0.7), ModelParams(0.5, 2, 0.5)};
  const int level = 14;
  const int j_min = 4;
  const int j_max = level - 4;
  bool ok = true;
  json rows = json::array();
  std::vector<std::string> parts;
  int idx = 0;
  for (const auto& p : sets) {
    const PathSynthesizer synth(p, level);
    const auto d = map_paths(synth, 50, seed_for(o, 10, idx++), o.threads,
                             [&](const PathSample& s) { return box_dimension(s, j_min, j_max).slope; });
    const double target = std::max(2.0 - p.hurst(), 2.0 - p.K());
    const double m = mean(d);
    const bool gated = p.K() > 2.0 * p.hurst() - 1.0;
    const bool this_ok = std::abs(m - target) <= tol;
    if (gated) ok = ok && this_ok;
    rows.push_back({{"params", to_json(p)},
                    {"target", target},
                    {"mean_slope", m},
                    {"K_gt_2H_minus_1", gated},
                    {"informational", !gated},
                    {"ok", this_ok}});
    parts.push_back(fmt::format("H={} {:.3f} vs {:.3f}{}", p.hurst(), m, target, gated ? "" : " (info)"));
    r.artifacts.push_back({"slopes_" + slug(p), "csv", columns_csv({"slope"}, {d})});
  }
  r.passed = ok;
  r.measured = {{"cases", rows}, {"levels", {j_min, j_max}}};
  r.tolerance = {{"abs_tol", tol}};
  r.summary = fmt::format("{}; {}; {} (tol {})", parts[0], parts[1], parts[2], tol);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 11: atom of the argmax at 0 iff H > K.
CheckResult check_argmax(const CheckOptions& o) {
  CheckResult r;
  const double atom_min = o.tol("argmax", "atom_min", 0.01);
  const double atom_drift = o.tol("argmax", "atom_drift", 0.20);
  const std::size_t paths = 20000;

  const ModelParams pa(0.7, 2, 0.8);
  const auto ra = argmax_distribution(PathSynthesizer(pa, 12), paths, seed_for(o, 11, 0), {8, 9, 10, 11, 12}, 20,
                                      o.threads);
  const double a8 = ra.refinement_series.front().atom_at_zero_freq;
  const double a12 = ra.refinement_series.back().atom_at_zero_freq;
  const double change = a8 > 0.0 ? std::abs(a12 / a8 - 1.0) : std::numeric_limits<double>::infinity();
  const bool ok_a = a12 >= atom_min && change < atom_drift;

  const ModelParams pb(0.5, 2, 0.3);
  const auto rb = argmax_distribution(PathSynthesizer(pb, 10), paths, seed_for(o, 11, 1), {4, 5, 6, 7, 8, 9, 10}, 20,
                                      o.threads);
  int inversions = 0;
  for (std::size_t i = 1; i < rb.refinement_series.size(); ++i) {
    if (rb.refinement_series[i].max_cell_freq >= rb.refinement_series[i - 1].max_cell_freq) ++inversions;
  }
  const bool ok_b = inversions <= 1;

  r.passed = ok_a && ok_b;
  r.measured = {{"a", {{"params", to_json(pa)}, {"report", to_json(ra)}, {"atom_change", change}, {"ok", ok_a}}},
                {"b", {{"params", to_json(pb)}, {"report", to_json(rb)}, {"inversions", inversions}, {"ok", ok_b}}}};
  r.tolerance = {{"atom_min", atom_min}, {"atom_drift", atom_drift}, {"max_inversions", 1}};
  r.summary = fmt::format("H>K atom {:.4f} -> {:.4f} (change {:.3f}); H<K max cell {:.4f} -> {:.4f}, {} inversions", a8,
                          a12, change, rb.refinement_series.front().max_cell_freq,
                          rb.refinement_series.back().max_cell_freq, inversions);
  auto series_csv = [](const ArgmaxReport& a) {
    std::vector<double> lv, mc, az;
    for (const auto& pt : a.refinement_series) {
      lv.push_back(pt.level);
      mc.push_back(pt.max_cell_freq);
      az.push_back(pt.atom_at_zero_freq);
    }
    return columns_csv({"level", "max_cell_freq", "atom_at_zero_freq"}, {lv, mc, az});
  };
  r.artifacts.push_back({"refinement_" + slug(pa), "csv", series_csv(ra)});
  r.artifacts.push_back({"refinement_" + slug(pb), "csv", series_csv(rb)});
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// 12: per-level s_Phi trends for Phi, Phi/log and Phi*log.
CheckResult check_phi(const CheckOptions& o) {
  CheckResult r;
  const double flat = o.tol("phi", "flat_slope", 0.1);
  const double sep = o.tol("phi", "separation_slope", 0.2);
  const double x0 = o.tol("phi", "x0", 0.1);
  const ModelParams p(0.5, 2, 0.3);
  const PathSynthesizer synth(p, 14);
  const int j_min = 8;
  const int j_max = 14;
  const auto series = map_paths(synth, 20, seed_for(o, 12, 0), o.threads, [&](const PathSample& s) {
    std::vector<std::vector<double>> out;
    for (int lp : {0, -1, 1}) {
      PhiSpec phi = PhiSpec::matched(p);
      phi.log_power = lp;
      phi.x0 = x0;
      out.push_back(phi_variation(s, phi, PartitionStrategy::badic_sweep, j_min, j_max).per_level);
    }
    return out;
  });
  std::vector<double> slopes;
  std::vector<std::vector<double>> averaged;
  std::vector<double> levels;
  for (int j = j_min; j <= j_max; ++j) levels.push_back(j);
  for (std::size_t v = 0; v < 3; ++v) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : series) rows.push_back(s[v]);
    PhiVariationReport rep;
    rep.per_level = average_series(rows);
    for (int j = j_min; j <= j_max; ++j) rep.levels.push_back(j);
    slopes.push_back(phi_scaling(rep, p.b()).slope);
    averaged.push_back(rep.per_level);
  }
  const bool ok_phi = std::abs(slopes[0]) <= flat;
  const bool ok_div = slopes[1] >= sep;
  const bool ok_log = slopes[2] <= -sep;
  r.passed = ok_phi && ok_div && ok_log;
  r.measured = {{"params", to_json(p)},
                {"levels", {j_min, j_max}},
                {"paths", 20},
                {"x0", x0},
                {"slope_phi", slopes[0]},
                {"slope_phi_over_log", slopes[1]},
                {"slope_phi_times_log", slopes[2]},
                {"ok", {ok_phi, ok_div, ok_log}}};
  r.tolerance = {{"abs_slope_phi", flat}, {"slope_phi_over_log_min", sep}, {"slope_phi_times_log_max", -sep}};
  r.summary = fmt::format("slopes: Phi {:.3f} (|.|<={}), Phi/log {:.3f} (>={}), Phi*log {:.3f} (<=-{})", slopes[0], flat,
                          slopes[1], sep, slopes[2], sep);
  r.artifacts.push_back({"series", "csv", columns_csv({"level", "phi", "phi_over_log", "phi_times_log"},
                                                      {levels, averaged[0], averaged[1], averaged[2]})});
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// Regime-matched uniform normalizer gives the flattest ratio series.
CheckResult check_modulus_uniform(const CheckOptions& o) {
  CheckResult r;
  const ModelParams p(0.5, 2, 0.3);
  const PathSynthesizer synth(p, 14);
  const auto per_path = map_paths(synth, 20, seed_for(o, 21, 0), o.threads, [](const PathSample& s) {
    std::vector<std::vector<double>> out;
    for (auto n : kAllNormalizers) out.push_back(modulus_profile(s, ModulusMode::uniform, n, 0.5, 4, 14).series.stats);
    return out;
  });
  json rows = json::array();
  double best = std::numeric_limits<double>::infinity();
  Normalizer best_n = Normalizer::sqrt_log;
  std::size_t idx = 0;
  for (auto n : kAllNormalizers) {
    std::vector<std::vector<double>> rows_n;
    for (const auto& s : per_path) rows_n.push_back(s[idx]);
    ScalingReport rep;
    rep.stats = average_series(rows_n);
    for (int j = 4; j <= 14; ++j) rep.scales.push_back(std::pow(2.0, -j));
    fit_report(rep);
    rows.push_back({{"normalizer", to_string(n)}, {"slope", rep.slope}});
    if (std::abs(rep.slope) < best) {
      best = std::abs(rep.slope);
      best_n = n;
    }
    ++idx;
  }
  const Normalizer matched = matched_uniform_normalizer(p);
  r.passed = best_n == matched;
  r.measured = {{"params", to_json(p)}, {"normalizers", rows}, {"flattest", to_string(best_n)}};
  r.tolerance = {{"expected_flattest", to_string(matched)}};
  r.summary = fmt::format("flattest {} (|slope| {:.3f}), matched {}", to_string(best_n), best, to_string(matched));
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// H > K: the local limit ratio is a non-degenerate random variable.
CheckResult check_modulus_local(const CheckOptions& o) {
  CheckResult r;
  const double cv_min = o.tol("modulus-local", "cv_min", 0.1);
  const ModelParams p(0.7, 2, 0.8);
  const PathSynthesizer synth(p, 12);
  const auto tail = map_paths(synth, 200, seed_for(o, 22, 0), o.threads, [](const PathSample& s) {
    return modulus_profile(s, ModulusMode::local, Normalizer::power_K, 0.5, 1, 12).tail_max;
  });
  const double m = mean(tail);
  double var = 0.0;
  for (double x : tail) var += (x - m) * (x - m);
  var /= static_cast<double>(tail.size() - 1);
  const double cv = std::sqrt(var) / m;
  r.passed = cv >= cv_min;
  r.measured = {{"params", to_json(p)}, {"paths", 200}, {"mean", m}, {"cv", cv}};
  r.tolerance = {{"cv_min", cv_min}};
  r.summary = fmt::format("coefficient of variation {:.3f} (>= {})", cv, cv_min);
  r.artifacts.push_back({"tail_max", "csv", columns_csv({"tail_max"}, {tail})});
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

// Circulant and Cholesky synthesis give the same marginal variances.
CheckResult check_cov_mc2(const CheckOptions& o) {
  CheckResult r;
  const double zmax = o.tol("cov-mc2", "z_max", 5.0);
  const int level = 8;
  const std::size_t paths = 20000;
  bool ok = true;
  json rows = json::array();
  int idx = 0;
  double worst = 0.0;
  for (double h : {0.3, 0.7}) {
    const ModelParams p(0.5, 2, h);
    const BadicCovariance cov(p, level, true);
    std::vector<std::uint64_t> points;
    for (std::uint64_t k = 1; k <= 10; ++k) points.push_back(k * 23);
    std::vector<std::vector<double>> var(2);
    std::size_t m = 0;
    for (auto method : {SynthesisMethod::circulant, SynthesisMethod::cholesky}) {
      const PathSynthesizer synth(p, level, ProcessKind::ww, method);
      const auto vals = map_paths(synth, paths, seed_for(o, 23, 2 * idx + static_cast<int>(m)), o.threads, [&](const PathSample& s) {
        std::vector<double> sq;
        for (auto k : points) sq.push_back(s.values[k] * s.values[k]);
        return sq;
      });
      var[m] = average_series(vals);
      ++m;
    }
    ++idx;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double c = cov.cov(points[i], points[i]);
      const double se = std::sqrt(2.0 * 2.0 * c * c / static_cast<double>(paths));
      const double z = std::abs(var[0][i] - var[1][i]) / se;
      worst = std::max(worst, z);
      rows.push_back({{"H", h}, {"point", points[i]}, {"circulant", var[0][i]}, {"cholesky", var[1][i]}, {"exact", c}, {"z", z}});
    }
  }
  ok = worst <= zmax;
  r.passed = ok;
  r.measured = {{"points", rows}, {"max_z", worst}};
  r.tolerance = {{"z_max", zmax}};
  r.summary = fmt::format("max z {:.2f} over 2x10 points (tol {})", worst, zmax);
  r.artifacts.push_back({"summary", "json", dump(r.measured)});
  return r;
}

}  // namespace

double CheckOptions::tol(std::string_view check, std::string_view name, double fallback) const {
  const auto it = tolerances.find(fmt::format("{}.{}", check, name));
  return it == tolerances.end() ? fallback : it->second;
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry{
      {"isometry", 1, "isometry oracle equivalence", check_isometry},
      {"hl", 2, "Hardy-Littlewood identity at H=1/2", check_hl},
      {"hls", 3, "homogeneous family norm grows linearly", check_hls},
      {"hls-lp", 4, "strict improvement over the L^{1/H} bound", check_hls_lp},
      {"positivity", 5, "indicator pairing positivity", check_positivity},
      {"quasi-helix", 6, "quasi-helix bounds", check_quasi_helix},
      {"tn", 7, "restricted lower bound on S_N pairs", check_tn},
      {"cov-mc", 8, "Monte Carlo vs exact covariance", check_cov_mc},
      {"roughness", 9, "roughness dichotomy", check_roughness},
      {"dimension", 10, "box dimension", check_dimension},
      {"argmax", 11, "argmax atom at zero", check_argmax},
      {"phi", 12, "Phi-variation trend separation", check_phi},
      {"modulus-uniform", 0, "uniform modulus regime separation", check_modulus_uniform},
      {"modulus-local", 0, "local modulus limit is random for H>K", check_modulus_local},
      {"cov-mc2", 0, "circulant vs Cholesky marginal variances", check_cov_mc2},
  };
  return registry;
}

CheckResult run_check(std::string_view name, const CheckOptions& opts) {
  for (const auto& info : check_registry()) {
    if (info.name != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = info.run(opts);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.name = info.name;
    r.criterion = info.criterion;
    r.title = info.title;
    return r;
  }
  throw ParameterError(fmt::format("unknown check '{}'", name));
}

std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& outdir,
                                                   const std::vector<CheckResult>& results) {
  std::vector<std::filesystem::path> written;
  for (const auto& r : results) {
    for (const auto& a : r.artifacts) {
      const std::filesystem::path rel = std::filesystem::path(r.name) / (a.name + "." + a.ext);
      write_text(outdir / rel, a.content);
      written.push_back(rel);
    }
  }
  return written;
}

CheckResult check_determinism(const std::vector<std::string>& names, const CheckOptions& opts,
                              const std::filesystem::path& outdir_a, const std::filesystem::path& outdir_b) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> again;
  for (const auto& n : names) again.push_back(run_check(n, opts));
  const auto files = write_artifacts(outdir_b, again);
  std::vector<std::string> differing;
  for (const auto& f : files) {
    std::string a;
    try {
      a = read_text(outdir_a / f);
    } catch (const ResourceError&) {
      differing.push_back(f.string());
      continue;
    }
    if (a != read_text(outdir_b / f)) differing.push_back(f.string());
  }
  CheckResult r;
  r.name = "determinism";
  r.criterion = 13;
  r.title = "byte-identical reruns";
  r.passed = differing.empty() && !files.empty();
  r.measured = {{"files_compared", files.size()}, {"differing", differing}};
  r.tolerance = {{"differing", 0}};
  r.summary = fmt::format("{} data files compared, {} differ", files.size(), differing.size());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace wwb
