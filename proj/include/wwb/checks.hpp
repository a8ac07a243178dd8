#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wwb/io.hpp"

namespace wwb {

/// A data file produced by a check: written to <outdir>/<check>/<name>.<ext>.
struct Artifact {
  std::string name;
  std::string ext;  // "csv" or "json"
  std::string content;
};

struct CheckResult {
  std::string name;
  int criterion = 0;  // acceptance criterion number, 0 for auxiliary checks
  std::string title;
  bool passed = false;
  /// Parts marked informational are reported but never fail the check.
  json measured = json::object();
  json tolerance = json::object();
  std::string summary;
  std::vector<Artifact> artifacts;
  double seconds = 0.0;
};

struct CheckOptions {
  std::uint64_t seed = 20240611;
  unsigned threads = 0;
  /// Overrides keyed by "<check>.<name>", e.g. "isometry.rel_tol".
  std::map<std::string, double> tolerances;

  double tol(std::string_view check, std::string_view name, double fallback) const;
};

struct CheckInfo {
  std::string name;
  int criterion = 0;
  std::string title;
  CheckResult (*run)(const CheckOptions&);
};

/// Every named check, acceptance criteria first in criterion order.  The determinism
/// check is not listed; see check_determinism.
const std::vector<CheckInfo>& check_registry();

/// Runs one check by name (timing included).  ParameterError for an unknown name.
CheckResult run_check(std::string_view name, const CheckOptions& opts);

/// Writes the artifacts of each result under outdir and returns the written paths,
/// relative to outdir, in write order.
std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& outdir,
                                                   const std::vector<CheckResult>& results);

/// Runs `names` again into outdir_b and compares every data file byte for byte with the
/// same file under outdir_a.
CheckResult check_determinism(const std::vector<std::string>& names, const CheckOptions& opts,
                              const std::filesystem::path& outdir_a, const std::filesystem::path& outdir_b);

/// Manifest: config echo, code version, generator, wall time, per-check outcome and the
/// SHA-256 of every listed file.
json build_manifest(const json& config, const std::vector<CheckResult>& results, const std::filesystem::path& outdir,
                    const std::vector<std::filesystem::path>& files, double wall_seconds);

/// Writes <outdir>/manifest.json.
void write_manifest(const std::filesystem::path& outdir, const json& manifest);

/// Version string compiled into the library.
std::string_view code_version();

}  // namespace wwb
