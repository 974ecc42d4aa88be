#include "config.hpp"

#include <cstdlib>
#include <fstream>

#include "digest.hpp"
#include "error.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

enum class Kind { integer, real, string };

struct KeySpec {
  const char* key;
  Kind kind;
  json fallback;
};

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> table = {
      {"workspace", Kind::string, "workspace"},
      {"seed", Kind::integer, 42},
      {"ingest.api_base", Kind::string, "https://orkg.org"},
      {"ingest.statements_path", Kind::string, "/api/statements"},
      {"ingest.page_param", Kind::string, "page"},
      {"ingest.size_param", Kind::string, "size"},
      {"ingest.page_size", Kind::integer, 100},
      {"ingest.fanout", Kind::integer, 4},
      {"ingest.max_retries", Kind::integer, 3},
      {"ingest.backoff_ms", Kind::integer, 500},
      {"ingest.timeout_s", Kind::integer, 30},
      {"ingest.dump", Kind::string, ""},
      {"ingest.fixtures", Kind::string, ""},
      {"abstracts.crossref_base", Kind::string, "https://api.crossref.org"},
      {"abstracts.semanticscholar_base", Kind::string, "https://api.semanticscholar.org"},
      {"abstracts.fanout", Kind::integer, 4},
      {"abstracts.rate", Kind::real, 5.0},
      {"abstracts.negative_ttl_days", Kind::integer, 30},
      {"abstracts.max_retries", Kind::integer, 3},
      {"abstracts.backoff_ms", Kind::integer, 500},
      {"abstracts.timeout_s", Kind::integer, 30},
      {"abstracts.fixtures", Kind::string, ""},
      {"build.phrases_file", Kind::string, ""},
      {"generate.variants", Kind::string, "unchanged,none,what,which,how"},
      {"split.threshold", Kind::integer, 10},
      {"split.train_fraction", Kind::real, 0.75},
      {"baseline.window", Kind::integer, 6},
  };
  return table;
}

const KeySpec* find_spec(std::string_view key) {
  for (const auto& s : specs())
    if (key == s.key) return &s;
  return nullptr;
}

json coerce(const KeySpec& spec, const json& v) {
  const std::string key = spec.key;
  switch (spec.kind) {
    case Kind::integer:
      if (v.is_number_integer()) return v;
      if (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())))
        return static_cast<long long>(v.get<double>());
      break;
    case Kind::real:
      if (v.is_number()) return v.get<double>();
      break;
    case Kind::string:
      if (v.is_string()) return v;
      break;
  }
  throw Error(ErrorCode::config, "config key '" + key + "' has the wrong type");
}

json parse_text(const KeySpec& spec, std::string_view text) {
  const std::string s(text);
  const std::string key = spec.key;
  try {
    std::size_t used = 0;
    switch (spec.kind) {
      case Kind::integer: {
        const long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
        break;
      }
      case Kind::real: {
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
        break;
      }
      case Kind::string:
        return s;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::config, "config key '" + key + "': cannot parse '" + s + "'");
}

}  // namespace

std::string to_string(ConfigSource s) {
  switch (s) {
    case ConfigSource::defaults: return "default";
    case ConfigSource::file: return "file";
    case ConfigSource::env: return "env";
    case ConfigSource::flag: return "flag";
  }
  return "default";
}

Config::Config() {
  for (const auto& s : specs()) values_[s.key] = Value{s.fallback, ConfigSource::defaults};
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> k;
    for (const auto& s : specs()) k.emplace_back(s.key);
    return k;
  }();
  return out;
}

void Config::assign(const std::string& key, const json& value, ConfigSource source) {
  const KeySpec* spec = find_spec(key);
  if (!spec) throw Error(ErrorCode::config, "unknown config key '" + key + "'");
  auto& slot = values_[key];
  if (static_cast<int>(source) < static_cast<int>(slot.source)) return;
  slot = Value{coerce(*spec, value), source};
}

void Config::load_json(const json& doc, ConfigSource source) {
  if (!doc.is_object()) throw Error(ErrorCode::config, "config root must be an object");
  for (const auto& [name, v] : doc.items()) {
    if (v.is_object()) {
      for (const auto& [sub, sv] : v.items()) assign(name + "." + sub, sv, source);
    } else {
      assign(name, v, source);
    }
  }
}

void Config::load_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, "config file " + path.string() + ": " + e.what());
  }
  load_json(doc, ConfigSource::file);
}

void Config::apply_env(const EnvLookup& lookup) {
  static const std::pair<const char*, const char*> kVars[] = {
      {"KGQA_WORKSPACE", "workspace"},
      {"KGQA_API_BASE", "ingest.api_base"},
      {"KGQA_CROSSREF_BASE", "abstracts.crossref_base"},
      {"KGQA_S2_BASE", "abstracts.semanticscholar_base"},
  };
  for (const auto& [var, key] : kVars)
    if (auto v = lookup(var); v && !v->empty()) set(key, *v, ConfigSource::env);
}

void Config::apply_env() {
  apply_env([](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    return v ? std::optional<std::string>(v) : std::nullopt;
  });
}

void Config::set(std::string_view key, std::string_view value, ConfigSource source) {
  const KeySpec* spec = find_spec(key);
  if (!spec) throw Error(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
  assign(spec->key, parse_text(*spec, value), source);
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

const Config::Value& Config::at(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
  return it->second;
}

ConfigSource Config::source(std::string_view key) const { return at(key).source; }

std::string Config::get_string(std::string_view key) const {
  const auto& v = at(key).value;
  return v.is_string() ? v.get<std::string>() : v.dump();
}

long long Config::get_int(std::string_view key) const {
  const auto& v = at(key).value;
  if (!v.is_number()) throw Error(ErrorCode::config, "config key '" + std::string(key) + "' is not numeric");
  return v.get<long long>();
}

double Config::get_double(std::string_view key) const {
  const auto& v = at(key).value;
  if (!v.is_number()) throw Error(ErrorCode::config, "config key '" + std::string(key) + "' is not numeric");
  return v.get<double>();
}

void Config::check_conflicts() const {
  const bool dump = !get_string("ingest.dump").empty();
  const bool fixtures = !get_string("ingest.fixtures").empty();
  // An api_base inherited from the environment is ambient, not a request.
  const auto base_src = source("ingest.api_base");
  const bool explicit_base = base_src == ConfigSource::flag || base_src == ConfigSource::file;
  if (dump && explicit_base)
    throw Error(ErrorCode::config, "conflicting config: ingest.dump and ingest.api_base are mutually exclusive");
  if (dump && fixtures)
    throw Error(ErrorCode::config, "conflicting config: ingest.dump and ingest.fixtures are mutually exclusive");
  if (get_int("ingest.page_size") <= 0) throw Error(ErrorCode::config, "ingest.page_size must be positive");
  if (get_int("ingest.fanout") <= 0 || get_int("abstracts.fanout") <= 0)
    throw Error(ErrorCode::config, "fanout must be positive");
  const double f = get_double("split.train_fraction");
  if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::config, "split.train_fraction must be in (0, 1)");
  if (get_int("split.threshold") < 1) throw Error(ErrorCode::config, "split.threshold must be >= 1");
  if (get_int("baseline.window") < 1) throw Error(ErrorCode::config, "baseline.window must be >= 1");
}

ordered_json Config::snapshot() const {
  ordered_json out = ordered_json::object();
  for (const auto& [key, v] : values_) {
    if (key == "workspace") continue;
    const auto dot = key.find('.');
    if (dot == std::string::npos)
      out[key] = v.value;
    else
      out[key.substr(0, dot)][key.substr(dot + 1)] = v.value;
  }
  return out;
}

}  // namespace kgqa
