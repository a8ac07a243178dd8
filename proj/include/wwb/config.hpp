#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wwb/io.hpp"
#include "wwb/model.hpp"

namespace wwb {

enum class ConfigType { integer, real, boolean, string, list };

std::string_view to_string(ConfigType t);

struct ConfigEntry {
  std::string key;  // "section.name", or "name" before any section header
  ConfigType type = ConfigType::string;
  std::string text;  // value as written, trimmed
};

/// Flat typed key-value text.  One entry per line, `name : type = value`, types int,
/// real, bool, str, list (comma separated words).  `#` starts a comment.  `[section]`
/// prefixes the following names with "section."; names inside a section may contain dots.  ParameterError with the line number
/// on malformed input, duplicate keys or values that do not parse as their type.
class Config {
 public:
  static Config parse(std::string_view text);

  bool has(std::string_view key) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  double get_real(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::string get_str(std::string_view key, std::string_view fallback) const;
  std::vector<std::string> get_list(std::string_view key) const;

  void set(std::string key, ConfigType type, std::string text);

  const std::vector<ConfigEntry>& entries() const { return entries_; }
  /// Canonical text; parse(to_text()) reproduces the entries.
  std::string to_text() const;
  json to_json() const;

 private:
  const ConfigEntry* find(std::string_view key, ConfigType type) const;
  std::vector<ConfigEntry> entries_;
};

/// Everything a `report` run needs.
struct ExperimentConfig {
  double alpha = 0.5;
  int b = 2;
  double hurst = 0.5;
  KappaVariant kappa = KappaVariant::standard;
  int level = 10;
  std::uint64_t seed = 20240611;
  std::size_t n_paths = 100;
  unsigned threads = 0;
  std::string outdir = "out";
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;

  ModelParams params() const { return ModelParams(alpha, b, hurst, KappaSpec{kappa}); }

  /// Reads [model] alpha b H kappa, [run] level seed n_paths threads outdir checks,
  /// [tolerance] <name> : real.  Unknown keys are a ParameterError.
  static ExperimentConfig from(const Config& c);
  Config to_config() const;
};

}  // namespace wwb
