#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace kgqa {

// Where a value came from; later layers win.
enum class ConfigSource { defaults, file, env, flag };

std::string to_string(ConfigSource s);

/// Flat dotted-key configuration ("ingest.page_size") layered as
/// flags > env > file > defaults. Every key has a fixed type; unknown keys
/// and type mismatches raise Error(config).
class Config {
 public:
  Config();

  /// Accepts a JSON object with one section per module, e.g.
  /// {"seed": 7, "ingest": {"page_size": 50}}.
  void load_file(const std::filesystem::path& path);
  void load_json(const nlohmann::json& doc, ConfigSource source = ConfigSource::file);

  using EnvLookup = std::function<std::optional<std::string>(const char*)>;
  void apply_env(const EnvLookup& lookup);
  void apply_env();  // process environment

  /// Parses `value` according to the key's type.
  void set(std::string_view key, std::string_view value, ConfigSource source = ConfigSource::flag);

  bool has(std::string_view key) const;
  ConfigSource source(std::string_view key) const;
  std::string get_string(std::string_view key) const;
  long long get_int(std::string_view key) const;
  double get_double(std::string_view key) const;

  /// Throws Error(config) on mutually exclusive settings.
  void check_conflicts() const;

  /// All keys except the workspace path, nested by section, sorted.
  nlohmann::ordered_json snapshot() const;

  static const std::vector<std::string>& keys();

 private:
  struct Value {
    nlohmann::json value;
    ConfigSource source = ConfigSource::defaults;
  };
  const Value& at(std::string_view key) const;
  void assign(const std::string& key, const nlohmann::json& value, ConfigSource source);

  std::map<std::string, Value, std::less<>> values_;
};

}  // namespace kgqa
