#include "wwb/io.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "wwb/error.hpp"

namespace wwb {

json to_json(const ModelParams& p) {
  return json{{"alpha", p.alpha()},
              {"b", p.b()},
              {"H", p.hurst()},
              {"kappa", to_string(p.kappa_spec().variant)},
              {"K", p.K()},
              {"regime", to_string(p.regime())}};
}

json to_json(const ScalingReport& r) {
  return json{{"scales", r.scales},     {"stats", r.stats},         {"slope", r.slope},
              {"intercept", r.intercept}, {"r_squared", r.r_squared}, {"regime_label", r.regime_label}};
}

json to_json(const RoughnessEstimate& r) {
  return json{{"gladyshev", r.gladyshev}, {"regression", r.regression}, {"level", r.level}};
}

json to_json(const PhiVariationReport& r) {
  return json{{"strategy", to_string(r.strategy)}, {"levels", r.levels}, {"per_level", r.per_level}, {"value", r.value}};
}

json to_json(const ModulusReport& r) { return json{{"series", to_json(r.series)}, {"tail_max", r.tail_max}}; }

json to_json(const ArgmaxReport& r) {
  json series = json::array();
  for (const auto& p : r.refinement_series) {
    series.push_back({{"level", p.level}, {"max_cell_freq", p.max_cell_freq}, {"atom_at_zero_freq", p.atom_at_zero_freq}});
  }
  return json{{"n_paths", r.n_paths},
              {"n_bins", r.n_bins},
              {"histogram", r.histogram},
              {"atom_at_zero_freq", r.atom_at_zero_freq},
              {"max_cell_freq", r.max_cell_freq},
              {"chi2", r.chi2},
              {"chi2_pvalue", r.chi2_pvalue},
              {"refinement_series", series}};
}

json to_json(const RestrictedBound& r) {
  return json{{"pairs", r.pairs}, {"min_ratio", r.min_ratio}, {"max_ratio", r.max_ratio}};
}

json to_json(const QuasiHelixProfile& r) {
  return json{{"normalization", r.normalization}, {"levels", r.levels},       {"min_ratio", r.min_ratio},
              {"mean_ratio", r.mean_ratio},       {"max_ratio", r.max_ratio}, {"slope_min", r.slope_min},
              {"slope_mean", r.slope_mean},       {"slope_max", r.slope_max}};
}

json to_json(const HLReport& r) {
  return json{{"strategy", to_string(r.strategy)},
              {"k", r.k},
              {"alpha", r.alpha},
              {"H", r.hurst},
              {"M_values", r.M_values},
              {"norms_sq", r.norms_sq},
              {"slope", r.slope},
              {"const_lo", r.const_lo},
              {"const_hi", r.const_hi},
              {"lp_norms_sq", r.lp_norms_sq},
              {"lp_slope", r.lp_slope}};
}

json to_json(const HLCorpusReport& r) {
  return json{{"H", r.hurst},
              {"n_functions", r.n_functions},
              {"min_ratio", r.min_ratio},
              {"max_ratio", r.max_ratio},
              {"bound", r.bound},
              {"bound_half", r.bound_half},
              {"direction_ok", r.direction_ok},
              {"stable", r.stable}};
}

json to_json(const PositivityReport& r) {
  return json{{"cases", r.cases}, {"min_value", r.min_value}, {"below_tolerance", r.below_tolerance}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string columns_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw ParameterError("CSV needs one name per column");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ParameterError("CSV columns differ in length");
  }
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += fmt::format("{:.17g}", columns[i][r]);
    }
    out += '\n';
  }
  return out;
}

std::string scaling_csv(const ScalingReport& r) { return columns_csv({"scale", "stat"}, {r.scales, r.stats}); }

std::string covariance_csv(const CovMatrix& m) {
  std::ostringstream os;
  write_csv(os, m);
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw ResourceError(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  std::ofstream f(path, std::ios::binary);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw ResourceError(fmt::format("cannot write {}", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ResourceError(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw ResourceError("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace wwb
