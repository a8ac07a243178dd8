#include "wwb/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "wwb/error.hpp"

namespace wwb {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

ConfigType parse_type(std::string_view t, int line) {
  if (t == "int") return ConfigType::integer;
  if (t == "real") return ConfigType::real;
  if (t == "bool") return ConfigType::boolean;
  if (t == "str") return ConfigType::string;
  if (t == "list") return ConfigType::list;
  throw ParameterError(fmt::format("config line {}: unknown type '{}'", line, t));
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool valid(ConfigType type, std::string_view text) {
  std::int64_t i = 0;
  double d = 0.0;
  switch (type) {
    case ConfigType::integer: return parse_int(text, i);
    case ConfigType::real: return parse_real(text, d);
    case ConfigType::boolean: return text == "true" || text == "false";
    case ConfigType::string:
    case ConfigType::list: return true;
  }
  return false;
}

std::string real_text(double v) { return fmt::format("{}", v); }

}  // namespace

std::string_view to_string(ConfigType t) {
  switch (t) {
    case ConfigType::integer: return "int";
    case ConfigType::real: return "real";
    case ConfigType::boolean: return "bool";
    case ConfigType::string: return "str";
    case ConfigType::list: return "list";
  }
  return "str";
}

Config Config::parse(std::string_view text) {
  Config c;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ParameterError(fmt::format("config line {}: bad section header", line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.find_first_of(".[] ") != std::string::npos) {
        throw ParameterError(fmt::format("config line {}: sections do not nest", line_no));
      }
      continue;
    }
    const auto colon = line.find(':');
    const auto eq = line.find('=');
    if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon) {
      throw ParameterError(fmt::format("config line {}: expected 'name : type = value'", line_no));
    }
    const auto name = trim(line.substr(0, colon));
    // dots are allowed inside a section (keys split on the first dot), not above one
    if (name.empty() || name.find(' ') != std::string_view::npos ||
        (section.empty() && name.find('.') != std::string_view::npos)) {
      throw ParameterError(fmt::format("config line {}: bad name '{}'", line_no, name));
    }
    const ConfigType type = parse_type(trim(line.substr(colon + 1, eq - colon - 1)), line_no);
    const auto value = trim(line.substr(eq + 1));
    if (!valid(type, value)) {
      throw ParameterError(fmt::format("config line {}: '{}' is not a valid {}", line_no, value, to_string(type)));
    }
    std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
    if (c.has(key)) throw ParameterError(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    c.entries_.push_back({std::move(key), type, std::string(value)});
  }
  return c;
}

bool Config::has(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return true;
  }
  return false;
}

const ConfigEntry* Config::find(std::string_view key, ConfigType type) const {
  for (const auto& e : entries_) {
    if (e.key != key) continue;
    if (e.type != type) {
      throw ParameterError(fmt::format("config key '{}' has type {}, expected {}", key, to_string(e.type), to_string(type)));
    }
    return &e;
  }
  return nullptr;
}

std::int64_t Config::get_int(std::string_view key, std::int64_t fallback) const {
  const auto* e = find(key, ConfigType::integer);
  if (e == nullptr) return fallback;
  std::int64_t v = 0;
  parse_int(e->text, v);
  return v;
}

double Config::get_real(std::string_view key, double fallback) const {
  const auto* e = find(key, ConfigType::real);
  if (e == nullptr) return fallback;
  double v = 0.0;
  parse_real(e->text, v);
  return v;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto* e = find(key, ConfigType::boolean);
  return e == nullptr ? fallback : e->text == "true";
}

std::string Config::get_str(std::string_view key, std::string_view fallback) const {
  const auto* e = find(key, ConfigType::string);
  return e == nullptr ? std::string(fallback) : e->text;
}

std::vector<std::string> Config::get_list(std::string_view key) const {
  const auto* e = find(key, ConfigType::list);
  std::vector<std::string> out;
  if (e == nullptr) return out;
  std::string_view rest = e->text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  return out;
}

void Config::set(std::string key, ConfigType type, std::string text) {
  if (!valid(type, text)) throw ParameterError(fmt::format("'{}' is not a valid {}", text, to_string(type)));
  for (auto& e : entries_) {
    if (e.key == key) {
      e.type = type;
      e.text = std::move(text);
      return;
    }
  }
  entries_.push_back({std::move(key), type, std::move(text)});
}

std::string Config::to_text() const {
  std::string out;
  // top-level keys first, then sections in order of first appearance
  for (const auto& e : entries_) {
    if (e.key.find('.') == std::string::npos) out += fmt::format("{} : {} = {}\n", e.key, to_string(e.type), e.text);
  }
  std::vector<std::string> sections;
  for (const auto& e : entries_) {
    const auto dot = e.key.find('.');
    if (dot == std::string::npos) continue;
    const auto s = e.key.substr(0, dot);
    if (std::find(sections.begin(), sections.end(), s) == sections.end()) sections.push_back(s);
  }
  for (const auto& s : sections) {
    out += fmt::format("\n[{}]\n", s);
    for (const auto& e : entries_) {
      if (e.key.starts_with(s + ".")) {
        out += fmt::format("{} : {} = {}\n", e.key.substr(s.size() + 1), to_string(e.type), e.text);
      }
    }
  }
  return out;
}

json Config::to_json() const {
  json j = json::object();
  for (const auto& e : entries_) {
    switch (e.type) {
      case ConfigType::integer: j[e.key] = get_int(e.key, 0); break;
      case ConfigType::real: j[e.key] = get_real(e.key, 0.0); break;
      case ConfigType::boolean: j[e.key] = get_bool(e.key, false); break;
      case ConfigType::string: j[e.key] = e.text; break;
      case ConfigType::list: j[e.key] = get_list(e.key); break;
    }
  }
  return j;
}

ExperimentConfig ExperimentConfig::from(const Config& c) {
  static const std::set<std::string, std::less<>> known = {
      "model.alpha", "model.b",    "model.H",      "model.kappa", "run.level", "run.seed",
      "run.n_paths", "run.threads", "run.outdir", "run.checks"};
  for (const auto& e : c.entries()) {
    if (!known.contains(e.key) && !e.key.starts_with("tolerance.")) {
      throw ParameterError(fmt::format("unknown config key '{}'", e.key));
    }
  }
  ExperimentConfig x;
  x.alpha = c.get_real("model.alpha", x.alpha);
  x.b = static_cast<int>(c.get_int("model.b", x.b));
  x.hurst = c.get_real("model.H", x.hurst);
  x.kappa = parse_kappa_variant(c.get_str("model.kappa", to_string(x.kappa)));
  x.level = static_cast<int>(c.get_int("run.level", x.level));
  const auto seed = c.get_int("run.seed", static_cast<std::int64_t>(x.seed));
  const auto n_paths = c.get_int("run.n_paths", static_cast<std::int64_t>(x.n_paths));
  const auto threads = c.get_int("run.threads", x.threads);
  if (seed < 0 || n_paths < 1 || threads < 0) throw ParameterError("seed, n_paths and threads must be non-negative");
  x.seed = static_cast<std::uint64_t>(seed);
  x.n_paths = static_cast<std::size_t>(n_paths);
  x.threads = static_cast<unsigned>(threads);
  x.outdir = c.get_str("run.outdir", x.outdir);
  x.checks = c.get_list("run.checks");
  for (const auto& e : c.entries()) {
    if (e.key.starts_with("tolerance.")) x.tolerances[e.key.substr(10)] = c.get_real(e.key, 0.0);
  }
  x.params();  // validates the model
  return x;
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("model.alpha", ConfigType::real, real_text(alpha));
  c.set("model.b", ConfigType::integer, std::to_string(b));
  c.set("model.H", ConfigType::real, real_text(hurst));
  c.set("model.kappa", ConfigType::string, std::string(to_string(kappa)));
  c.set("run.level", ConfigType::integer, std::to_string(level));
  c.set("run.seed", ConfigType::integer, std::to_string(seed));
  c.set("run.n_paths", ConfigType::integer, std::to_string(n_paths));
  c.set("run.threads", ConfigType::integer, std::to_string(threads));
  c.set("run.outdir", ConfigType::string, outdir);
  std::string list;
  for (std::size_t i = 0; i < checks.size(); ++i) list += (i ? ", " : "") + checks[i];
  c.set("run.checks", ConfigType::list, list);
  for (const auto& [k, v] : tolerances) c.set("tolerance." + k, ConfigType::real, real_text(v));
  return c;
}

}  // namespace wwb
