#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wwb/covariance.hpp"
#include "wwb/fractional.hpp"
#include "wwb/model.hpp"
#include "wwb/stats.hpp"

namespace wwb {

using json = nlohmann::ordered_json;

json to_json(const ModelParams& p);
json to_json(const ScalingReport& r);
json to_json(const RoughnessEstimate& r);
json to_json(const PhiVariationReport& r);
json to_json(const ModulusReport& r);
json to_json(const ArgmaxReport& r);
json to_json(const RestrictedBound& r);
json to_json(const QuasiHelixProfile& r);
json to_json(const HLReport& r);
json to_json(const HLCorpusReport& r);
json to_json(const PositivityReport& r);

/// Pretty JSON text with a trailing newline.  Floats use the shortest round-trip form.
std::string dump(const json& j);

/// Column-oriented CSV: header line then rows, floats with 17 significant digits.
/// ParameterError if the columns differ in length.
std::string columns_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns);

std::string scaling_csv(const ScalingReport& r);
std::string covariance_csv(const CovMatrix& m);

/// Writes text to path, creating parent directories.  ResourceError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace wwb
