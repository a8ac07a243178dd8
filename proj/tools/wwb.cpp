// wwb: command-line front end.  One subcommand per library operation; every run writes
// <outdir>/<subcommand>/<name>.{csv,json} and <outdir>/manifest.json.
//
// Exit status: 0 success, 1 a check failed, 2 bad flags or parameters, 3 resource or numeric failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wwb/checks.hpp"
#include "wwb/config.hpp"
#include "wwb/covariance.hpp"
#include "wwb/error.hpp"
#include "wwb/fractional.hpp"
#include "wwb/io.hpp"
#include "wwb/paths.hpp"
#include "wwb/stats.hpp"

using namespace wwb;

namespace {

struct ModelOpts {
  double alpha = 0.5;
  int b = 2;
  double hurst = 0.5;
  std::string kappa = "standard";

  ModelParams params() const { return ModelParams(alpha, b, hurst, KappaSpec{parse_kappa_variant(kappa)}); }
};

struct RunOpts {
  int level = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string method = "circulant";
};

void add_model(CLI::App* sub, ModelOpts& m) {
  sub->add_option("--alpha", m.alpha, "weight alpha in (0,1)");
  sub->add_option("--b", m.b, "integer base b >= 2");
  sub->add_option("--H", m.hurst, "Hurst index in (0,1)");
  sub->add_option("--kappa", m.kappa, "bridge drift: standard or linear");
}

void add_run(CLI::App* sub, RunOpts& r) {
  sub->add_option("--level", r.level, "grid level n (b^n intervals)");
  sub->add_option("--seed", r.seed, "base seed");
  sub->add_option("--threads", r.threads, "worker threads, 0 = all (capped by WWB_THREADS)");
  sub->add_option("--method", r.method, "fGn synthesis: circulant or cholesky");
}

Artifact json_artifact(std::string name, const json& j) { return {std::move(name), "json", dump(j)}; }

Artifact csv_artifact(std::string name, std::string content) { return {std::move(name), "csv", std::move(content)}; }

// A plain output run: nothing to pass or fail.
CheckResult output(std::string name, std::string summary) {
  CheckResult r;
  r.name = std::move(name);
  r.title = r.name;
  r.passed = true;
  r.summary = std::move(summary);
  return r;
}

PathSynthesizer synthesizer(const ModelOpts& m, const RunOpts& r, ProcessKind process = ProcessKind::ww) {
  return PathSynthesizer(m.params(), r.level, process, parse_synthesis_method(r.method));
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// Echo of every option of the subcommand, given or defaulted.
json option_echo(const CLI::App* sub) {
  json j = json::object();
  j["subcommand"] = sub->get_name();
  for (const CLI::Option* o : sub->get_options()) {
    const std::string name = o->get_single_name();
    if (name == "help") continue;
    if (o->count() > 0) {
      const auto& res = o->results();
      j[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      j[name] = o->get_default_str();
    }
  }
  return j;
}

int finish(const std::filesystem::path& outdir, const json& config, std::vector<CheckResult> results, double wall) {
  const auto files = write_artifacts(outdir, results);
  write_manifest(outdir, build_manifest(config, results, outdir, files, wall));
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (r.criterion > 0) {
      std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.summary.c_str());
    } else {
      std::printf("%s: %s\n", r.name.c_str(), r.summary.c_str());
    }
  }
  std::printf("wrote %zu files under %s\n", files.size() + 1, outdir.string().c_str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Wiener-Weierstrass bridge: simulation and checks"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();  // --outdir may follow the subcommand
  std::string outdir = "out";
  app.add_option("--outdir", outdir, "output directory");

  ModelOpts model;
  RunOpts run;
  std::map<std::string, std::function<std::vector<CheckResult>()>> actions;

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample paths on the level-n grid");
  add_model(sim, model);
  add_run(sim, run);
  std::string process = "ww";
  std::size_t sim_paths = 1;
  bool binary = false;
  sim->add_option("--process", process, "ww, bridge or fbm");
  sim->add_option("--n-paths", sim_paths, "number of paths")->check(CLI::PositiveNumber);
  sim->add_flag("--binary", binary, "also write the ensemble in the WWB1 binary layout");
  actions["simulate"] = [&] {
    const PathSynthesizer synth = synthesizer(model, run, parse_process_kind(process));
    const Ensemble ens = make_ensemble(synth.params(), run.level, sim_paths, run.seed, run.threads,
                                       parse_process_kind(process), parse_synthesis_method(run.method));
    CheckResult r = output("simulate", fmt::format("{} {} path(s), {} intervals, method {}", sim_paths, process,
                                                   synth.grid().intervals(), to_string(synth.method())));
    std::vector<std::string> names{"t"};
    std::vector<std::vector<double>> cols;
    const auto& grid = ens.paths.front().grid;
    std::vector<double> t(grid.intervals() + 1);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = grid.point(k);
    cols.push_back(std::move(t));
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
      names.push_back(sim_paths == 1 ? "value" : fmt::format("path{}", i));
      cols.push_back(ens.paths[i].values);
    }
    r.artifacts.push_back(csv_artifact("paths", columns_csv(names, cols)));
    json meta{{"params", to_json(synth.params())},
              {"level", run.level},
              {"process", process},
              {"method", to_string(synth.method())},
              {"base_seed", run.seed},
              {"n_paths", sim_paths}};
    r.artifacts.push_back(json_artifact("meta", meta));
    if (binary) {
      std::ostringstream os;
      write_wwb1(os, ens);
      r.artifacts.push_back({"paths", "wwb1", os.str()});
    }
    return std::vector<CheckResult>{std::move(r)};
  };

  // cov
  auto* cov = app.add_subcommand("cov", "exact covariance c(s,t) at b-adic points");
  add_model(cov, model);
  cov->add_option("--level", run.level, "b-adic level of s and t");
  double s = 0.0;
  double t = 0.5;
  bool matrix = false;
  cov->add_option("--s", s, "first time point");
  cov->add_option("--t", t, "second time point");
  cov->add_flag("--matrix", matrix, "also write the full covariance matrix of the level grid");
  cov->add_option("--threads", run.threads, "worker threads for --matrix");
  actions["cov"] = [&] {
    const ModelParams p = model.params();
    const double c = ww_cov(s, t, p, run.level);
    CheckResult r = output("cov", fmt::format("c({}, {}) = {:.17g}", s, t, c));
    r.artifacts.push_back(json_artifact("value", json{{"params", to_json(p)}, {"level", run.level}, {"s", s}, {"t", t}, {"cov", c}}));
    if (matrix) r.artifacts.push_back(csv_artifact("matrix", covariance_csv(ww_cov_matrix(GridSpec(run.level, p.b()), p, run.threads))));
    return std::vector<CheckResult>{std::move(r)};
  };

  // increment-var
  auto* ivar = app.add_subcommand("increment-var", "E|Y(t)-Y(s)|^2 at b-adic points");
  add_model(ivar, model);
  ivar->add_option("--level", run.level, "b-adic level of s and t");
  ivar->add_option("--s", s, "first time point");
  ivar->add_option("--t", t, "second time point");
  actions["increment-var"] = [&] {
    const ModelParams p = model.params();
    const double v = ww_increment_variance(s, t, p, run.level);
    CheckResult r = output("increment-var", fmt::format("E|Y({1})-Y({0})|^2 = {2:.17g}", s, t, v));
    r.artifacts.push_back(
        json_artifact("value", json{{"params", to_json(p)}, {"level", run.level}, {"s", s}, {"t", t}, {"variance", v}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // hl-check
  auto* hl = app.add_subcommand("hl-check", "Hardy-Littlewood ratio of one step function or a random corpus");
  hl->add_option("--H", model.hurst, "Hurst index");
  std::vector<double> breaks;
  std::vector<double> values;
  std::size_t n_functions = 100;
  int pieces = 8;
  hl->add_option("--breakpoints", breaks, "breakpoints x0<x1<...; omit for a random corpus")->delimiter(',');
  hl->add_option("--values", values, "one value per piece")->delimiter(',');
  hl->add_option("--n-functions", n_functions, "corpus size");
  hl->add_option("--pieces", pieces, "pieces per random function");
  hl->add_option("--seed", run.seed, "corpus seed");
  hl->add_option("--threads", run.threads, "worker threads");
  actions["hl-check"] = [&] {
    CheckResult r;
    r.name = "hl-check";
    r.title = r.name;
    if (!breaks.empty()) {
      const StepFunction f(breaks, values);
      const HardyLittlewood h = hardy_littlewood_check(f, model.hurst);
      r.passed = h.direction_ok;
      r.criterion = 2;
      r.measured = json{{"ratio", h.ratio}, {"direction_ok", h.direction_ok}};
      r.summary = fmt::format("ratio {:.6g}", h.ratio);
      r.artifacts.push_back(json_artifact("ratio", json{{"H", model.hurst}, {"breakpoints", breaks}, {"values", values},
                                                        {"ratio", h.ratio}, {"direction_ok", h.direction_ok}}));
    } else {
      const HLCorpusReport c = hardy_littlewood_sweep(model.hurst, n_functions, pieces, run.seed, run.threads);
      r.passed = c.direction_ok && c.stable;
      r.criterion = 2;
      r.measured = to_json(c);
      r.summary = fmt::format("ratios in [{:.6g}, {:.6g}] over {} functions, bound {:.6g} (half corpus {:.6g})",
                              c.min_ratio, c.max_ratio, c.n_functions, c.bound, c.bound_half);
      r.artifacts.push_back(json_artifact("corpus", to_json(c)));
    }
    return std::vector<CheckResult>{std::move(r)};
  };

  // hls-sweep
  auto* hls = app.add_subcommand("hls-sweep", "norms of homogeneous k-interval families for M = 1..Mmax");
  int k = 1;
  int m_max = 16;
  std::vector<std::string> strategies{"contiguous", "random_gap", "adversarial_nested"};
  hls->add_option("--alpha", model.alpha, "family weight alpha");
  hls->add_option("--H", model.hurst, "Hurst index");
  hls->add_option("--k", k, "intervals per level");
  hls->add_option("--strategy", strategies, "contiguous, random_gap, adversarial_nested (repeatable)");
  hls->add_option("--Mmax", m_max, "largest M (>= 8)");
  hls->add_option("--seed", run.seed, "seed for random_gap");
  actions["hls-sweep"] = [&] {
    std::vector<FamilyStrategy> fs;
    for (const auto& name : strategies) fs.push_back(parse_family_strategy(name));
    const auto reports = hls_sweep(k, model.alpha, model.hurst, fs, m_max, run.seed);
    CheckResult r = output("hls-sweep", "");
    for (const auto& rep : reports) {
      const std::string name(to_string(rep.strategy));
      r.summary += fmt::format("{}{} slope {:.12g}", r.summary.empty() ? "" : "; ", name, rep.slope);
      std::vector<double> ms(rep.M_values.begin(), rep.M_values.end());
      r.artifacts.push_back(csv_artifact(name, columns_csv({"M", "norm_sq", "lp_norm_sq"}, {ms, rep.norms_sq, rep.lp_norms_sq})));
      r.artifacts.push_back(json_artifact(name, to_json(rep)));
    }
    return std::vector<CheckResult>{std::move(r)};
  };

  // variation
  auto* var = app.add_subcommand("variation", "Phi-variation of one path over b-adic partitions");
  add_model(var, model);
  add_run(var, run);
  std::string phi_variant = "matched";
  double power = 2.0;
  int log_power = 0;
  double x0 = 0.1;
  std::string partition = "badic_sweep";
  int j_min = 1;
  int j_max = -1;
  var->add_option("--phi", phi_variant, "matched, subcritical, critical, supercritical_power or custom_power");
  var->add_option("--power", power, "power for custom_power");
  var->add_option("--log-power", log_power, "extra log(1/x) exponent for custom_power");
  var->add_option("--x0", x0, "below x0 the log factor applies, above it the pure power");
  var->add_option("--partition", partition, "badic_sweep or extrema_partition");
  var->add_option("--j-min", j_min, "coarsest level");
  var->add_option("--j-max", j_max, "finest level, -1 = path level");
  actions["variation"] = [&] {
    const ModelParams p = model.params();
    PhiSpec phi = PhiSpec::matched(p);
    if (phi_variant != "matched") {
      phi.variant = parse_phi_variant(phi_variant);
      phi.power = power;
      phi.log_power = log_power;
    }
    phi.x0 = x0;
    const PathSample path = synthesizer(model, run).sample(run.seed);
    const PhiVariationReport rep = phi_variation(path, phi, parse_partition_strategy(partition), j_min, j_max);
    const ScalingReport sc = phi_scaling(rep, p.b(), std::string(to_string(phi.variant)));
    CheckResult r = output("variation", fmt::format("v_Phi >= {:.6g}, slope {:.4f}", rep.value, sc.slope));
    std::vector<double> lv(rep.levels.begin(), rep.levels.end());
    r.artifacts.push_back(csv_artifact("per_level", columns_csv({"level", "s_phi"}, {lv, rep.per_level})));
    r.artifacts.push_back(json_artifact("report", json{{"params", to_json(p)}, {"variation", to_json(rep)}, {"scaling", to_json(sc)}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // roughness
  auto* rough = app.add_subcommand("roughness", "Gladyshev and regression roughness estimates over an ensemble");
  add_model(rough, model);
  add_run(rough, run);
  std::size_t n_paths = 20;
  rough->add_option("--n-paths", n_paths, "number of paths")->check(CLI::PositiveNumber);
  actions["roughness"] = [&] {
    const PathSynthesizer synth = synthesizer(model, run);
    const auto est = map_paths(synth, n_paths, run.seed, run.threads, [](const PathSample& x) { return roughness_exponent(x); });
    std::vector<double> g, reg, idx;
    for (std::size_t i = 0; i < est.size(); ++i) {
      idx.push_back(static_cast<double>(i));
      g.push_back(est[i].gladyshev);
      reg.push_back(est[i].regression);
    }
    const double target = std::min(model.hurst, synth.params().K());
    CheckResult r = output("roughness", fmt::format("mean gladyshev {:.4f}, regression {:.4f}, min(H,K) {:.4f}", mean(g),
                                                    mean(reg), target));
    r.artifacts.push_back(csv_artifact("per_path", columns_csv({"path", "gladyshev", "regression"}, {idx, g, reg})));
    r.artifacts.push_back(json_artifact("summary", json{{"params", to_json(synth.params())},
                                                        {"level", run.level},
                                                        {"n_paths", n_paths},
                                                        {"mean_gladyshev", mean(g)},
                                                        {"mean_regression", mean(reg)},
                                                        {"min_H_K", target}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // modulus
  auto* mod = app.add_subcommand("modulus", "uniform or local modulus of continuity ratios of one path");
  add_model(mod, model);
  add_run(mod, run);
  std::string mode = "uniform";
  std::string normalizer = "matched";
  double s_point = 0.5;
  mod->add_option("--mode", mode, "uniform or local");
  mod->add_option("--normalizer", normalizer, "matched, sqrt_log, log, sqrt_loglog, sqrt_log_loglog or power_K");
  mod->add_option("--s", s_point, "base point for --mode local");
  mod->add_option("--j-min", j_min, "coarsest level");
  mod->add_option("--j-max", j_max, "finest level, -1 = path level");
  actions["modulus"] = [&] {
    const ModelParams p = model.params();
    const ModulusMode mm = parse_modulus_mode(mode);
    const Normalizer nz = normalizer != "matched"        ? parse_normalizer(normalizer)
                          : mm == ModulusMode::uniform ? matched_uniform_normalizer(p)
                                                       : matched_local_normalizer(p);
    const PathSample path = synthesizer(model, run).sample(run.seed);
    const ModulusReport rep = modulus_profile(path, mm, nz, s_point, j_min, j_max);
    CheckResult r = output("modulus", fmt::format("{} modulus with {}: tail max {:.4f}", mode, to_string(nz), rep.tail_max));
    r.artifacts.push_back(csv_artifact("series", scaling_csv(rep.series)));
    r.artifacts.push_back(json_artifact(
        "report", json{{"params", to_json(p)}, {"mode", mode}, {"normalizer", to_string(nz)}, {"modulus", to_json(rep)}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // dimension
  auto* dim = app.add_subcommand("dimension", "box-counting dimension averaged over an ensemble");
  add_model(dim, model);
  add_run(dim, run);
  int dj_min = 4;
  int dj_max = 10;
  dim->add_option("--n-paths", n_paths, "number of paths")->check(CLI::PositiveNumber);
  dim->add_option("--j-min", dj_min, "coarsest level");
  dim->add_option("--j-max", dj_max, "finest level");
  actions["dimension"] = [&] {
    const PathSynthesizer synth = synthesizer(model, run);
    const auto reps = map_paths(synth, n_paths, run.seed, run.threads,
                                [&](const PathSample& x) { return box_dimension(x, dj_min, dj_max); });
    std::vector<double> slopes, idx;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      idx.push_back(static_cast<double>(i));
      slopes.push_back(reps[i].slope);
    }
    const double target = 2.0 - std::min(model.hurst, synth.params().K());
    CheckResult r = output("dimension", fmt::format("mean box dimension {:.4f}, 2 - min(H,K) = {:.4f}", mean(slopes), target));
    r.artifacts.push_back(csv_artifact("per_path", columns_csv({"path", "dimension"}, {idx, slopes})));
    r.artifacts.push_back(csv_artifact("counts_path0", scaling_csv(reps.front())));
    r.artifacts.push_back(json_artifact("summary", json{{"params", to_json(synth.params())},
                                                        {"level", run.level},
                                                        {"levels", {dj_min, dj_max}},
                                                        {"n_paths", n_paths},
                                                        {"mean_dimension", mean(slopes)},
                                                        {"two_minus_min_H_K", target}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // argmax
  auto* amax = app.add_subcommand("argmax", "distribution of the leftmost argmax under grid refinement");
  add_model(amax, model);
  add_run(amax, run);
  std::size_t amax_paths = 2000;
  std::vector<int> levels;
  int bins = 20;
  amax->add_option("--n-paths", amax_paths, "number of paths (>= 1000)");
  amax->add_option("--levels", levels, "refinement levels, default 4..level")->delimiter(',');
  amax->add_option("--bins", bins, "histogram bins");
  actions["argmax"] = [&] {
    const PathSynthesizer synth = synthesizer(model, run);
    std::vector<int> lv = levels;
    if (lv.empty()) {
      for (int j = std::min(4, run.level); j <= run.level; ++j) lv.push_back(j);
    }
    const ArgmaxReport rep = argmax_distribution(synth, amax_paths, run.seed, lv, bins, run.threads);
    CheckResult r = output("argmax", fmt::format("atom at 0 {:.4f}, max cell {:.4f}, chi2 p {:.3g}", rep.atom_at_zero_freq,
                                                 rep.max_cell_freq, rep.chi2_pvalue));
    std::vector<double> rl, cell, atom;
    for (const auto& pt : rep.refinement_series) {
      rl.push_back(pt.level);
      cell.push_back(pt.max_cell_freq);
      atom.push_back(pt.atom_at_zero_freq);
    }
    std::vector<double> bin_idx, counts;
    for (std::size_t i = 0; i < rep.histogram.size(); ++i) {
      bin_idx.push_back(static_cast<double>(i));
      counts.push_back(static_cast<double>(rep.histogram[i]));
    }
    r.artifacts.push_back(csv_artifact("refinement", columns_csv({"level", "max_cell_freq", "atom_at_zero_freq"}, {rl, cell, atom})));
    r.artifacts.push_back(csv_artifact("histogram", columns_csv({"bin", "count"}, {bin_idx, counts})));
    r.artifacts.push_back(json_artifact("report", json{{"params", to_json(synth.params())}, {"argmax", to_json(rep)}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // restricted-pairs
  auto* rp = app.add_subcommand("restricted-pairs", "increment lower bound on the restricted digit set");
  add_model(rp, model);
  int big_n = 4;
  int depth = 10;
  std::size_t n_pairs = 1000;
  rp->add_option("--N", big_n, "even digit block length");
  rp->add_option("--depth", depth, "number of digit blocks");
  rp->add_option("--pairs", n_pairs, "number of sampled pairs");
  rp->add_option("--seed", run.seed, "sampling seed");
  rp->add_option("--threads", run.threads, "worker threads");
  actions["restricted-pairs"] = [&] {
    const ModelParams p = model.params();
    const RestrictedPairs pairs = sample_restricted_pairs(big_n, p.b(), depth, n_pairs, run.seed);
    const RestrictedBound bound = restricted_lower_bound(p, pairs, run.threads);
    CheckResult r = output("restricted-pairs", fmt::format("ratio in [{:.4f}, {:.4f}] over {} pairs", bound.min_ratio,
                                                           bound.max_ratio, bound.pairs));
    std::vector<double> a, c;
    for (const auto& [i, j] : pairs.pairs) {
      a.push_back(static_cast<double>(i));
      c.push_back(static_cast<double>(j));
    }
    r.artifacts.push_back(csv_artifact("pairs", columns_csv({"i", "j"}, {a, c})));
    r.artifacts.push_back(json_artifact("bound", json{{"params", to_json(p)},
                                                      {"N", big_n},
                                                      {"depth", depth},
                                                      {"level", pairs.level},
                                                      {"rejections", pairs.rejections},
                                                      {"bound", to_json(bound)}}));
    return std::vector<CheckResult>{std::move(r)};
  };

  // report
  auto* rep = app.add_subcommand("report", "run named checks from a config file");
  std::string config_path;
  std::vector<std::string> only;
  bool list = false;
  rep->add_option("--config", config_path, "config file (name : type = value lines)");
  rep->add_option("--checks", only, "checks to run, overriding the config")->delimiter(',');
  rep->add_flag("--list", list, "list the available checks and exit");
  json report_config;
  actions["report"] = [&] {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ExperimentConfig::from(Config::parse(read_text(config_path)));
    if (!only.empty()) cfg.checks = only;
    if (app.get_option("--outdir")->count() > 0) cfg.outdir = outdir;
    outdir = cfg.outdir;
    if (cfg.checks.empty()) {
      for (const auto& info : check_registry()) cfg.checks.push_back(info.name);
    }
    report_config = cfg.to_config().to_json();
    CheckOptions opts;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    opts.tolerances = cfg.tolerances;
    std::vector<CheckResult> results;
    for (const auto& name : cfg.checks) results.push_back(run_check(name, opts));

    // Summary of the configured model itself.
    const ModelParams p = cfg.params();
    const PathSynthesizer synth(p, cfg.level);
    const auto est = map_paths(synth, cfg.n_paths, cfg.seed, cfg.threads, [](const PathSample& x) { return roughness_exponent(x); });
    std::vector<double> g;
    for (const auto& e : est) g.push_back(e.gladyshev);
    CheckResult m = output("model", fmt::format("K {:.4f}, regime {}, mean roughness {:.4f} over {} paths", p.K(),
                                                to_string(p.regime()), mean(g), cfg.n_paths));
    m.artifacts.push_back(json_artifact("summary", json{{"params", to_json(p)},
                                                        {"level", cfg.level},
                                                        {"n_paths", cfg.n_paths},
                                                        {"mean_gladyshev", mean(g)}}));
    results.push_back(std::move(m));
    return results;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list) {
      for (const auto& info : check_registry()) {
        std::printf("%-16s %s%s\n", info.name.c_str(), info.title.c_str(),
                    info.criterion > 0 ? fmt::format(" (criterion {})", info.criterion).c_str() : "");
      }
      return 0;
    }
    const CLI::App* sub = app.get_subcommands().front();
    const auto t0 = std::chrono::steady_clock::now();
    auto results = actions.at(sub->get_name())();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json config = sub->get_name() == "report" ? report_config : option_echo(sub);
    return finish(outdir, config, std::move(results), wall);
  } catch (const Error& e) {
    // bad input of any kind is a usage error; resource and numeric failures are not
    const bool usage = dynamic_cast<const ResourceError*>(&e) == nullptr && dynamic_cast<const NumericError*>(&e) == nullptr;
    std::fprintf(stderr, "error: %s\n", e.what());
    return usage ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
