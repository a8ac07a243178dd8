#include <chrono>
#include <ctime>

#include <fmt/format.h>

#include "wwb/checks.hpp"
#include "wwb/rng.hpp"

namespace wwb {

std::string_view code_version() { return WWB_VERSION; }

json build_manifest(const json& config, const std::vector<CheckResult>& results, const std::filesystem::path& outdir,
                    const std::vector<std::filesystem::path>& files, double wall_seconds) {
  json checks = json::array();
  for (const auto& r : results) {
    checks.push_back({{"name", r.name},
                      {"criterion", r.criterion},
                      {"passed", r.passed},
                      {"summary", r.summary},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"seconds", r.seconds}});
  }
  json listed = json::array();
  for (const auto& f : files) {
    listed.push_back({{"path", f.generic_string()}, {"sha256", sha256_hex(read_text(outdir / f))}});
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  return json{{"code_version", code_version()},
              {"generator", kGeneratorName},
              {"created_utc", fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", utc.tm_year + 1900, utc.tm_mon + 1,
                                          utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec)},
              {"wall_seconds", wall_seconds},
              {"config", config},
              {"checks", checks},
              {"files", listed}};
}

void write_manifest(const std::filesystem::path& outdir, const json& manifest) {
  write_text(outdir / "manifest.json", dump(manifest));
}

}  // namespace wwb
