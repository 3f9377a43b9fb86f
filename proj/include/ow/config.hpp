#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ow {

// Minimal TOML-style config: top-level and [table] sections of key = value
// pairs; values are strings, numbers, booleans, or (nested) arrays.
struct ConfigValue {
  enum class Kind { string, number, boolean, array } kind = Kind::number;
  std::string str;
  double num = 0.0;
  bool b = false;
  std::vector<ConfigValue> arr;
  int line = 0;
};

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>");

  // "key" or "table.key"
  const ConfigValue* find(const std::string& dotted) const;
  std::vector<std::string> keys() const;
  const std::string& text() const { return raw_; }

 private:
  std::map<std::string, ConfigValue> values_;
  std::string raw_;
};

// Typed accessors that accumulate schema violations instead of throwing one
// at a time; unknown keys are rejected with a nearest-key suggestion.
class SchemaReader {
 public:
  explicit SchemaReader(const ConfigFile& cfg) : cfg_(cfg) {}

  double number(const std::string& key, std::optional<double> fallback = {});
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = {});
  std::uint64_t uinteger(const std::string& key, std::optional<std::uint64_t> fallback = {});
  bool boolean(const std::string& key, std::optional<bool> fallback = {});
  std::string string(const std::string& key, std::optional<std::string> fallback = {});
  std::vector<double> number_array(const std::string& key,
                                   std::optional<std::vector<double>> fallback = {});
  std::vector<std::vector<double>> number_array2(const std::string& key);
  bool has(const std::string& key) const { return cfg_.find(key) != nullptr; }

  void require(bool ok, const std::string& message);
  // Throws config_error listing every violation plus unknown keys.
  void finish();

 private:
  const ConfigFile& cfg_;
  std::vector<std::string> errors_;
  std::vector<std::string> seen_;
};

}  // namespace ow
