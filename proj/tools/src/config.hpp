#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace perilimit::cli {

using Json = nlohmann::ordered_json;

/// Invalid configuration: unknown key, bad value, wrong type. Maps to exit 64.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { integer, real, text, real_list, real_or_auto, boolean };

struct KeySpec {
  std::string section;
  std::string key;  // may contain one dot, e.g. "g.kind"
  ValueType type;
  std::string default_value;  // textual, parsed like a config value
  std::string doc;
};

/// The full schema in documentation order.
const std::vector<KeySpec>& schema();

using Value = std::variant<long long, double, std::string, std::vector<double>, bool>;

/// Resolved configuration: every schema key has a value.
class RunConfig {
 public:
  /// All defaults.
  RunConfig();

  /// Overrides from an INI or JSON file (chosen by content: a leading '{' is JSON).
  void load_file(const std::string& path);
  void load_text(const std::string& text);
  /// Sets one key from its textual form, validating against the schema.
  void set(const std::string& section, const std::string& key, const std::string& text);

  [[nodiscard]] long long integer(const std::string& section, const std::string& key) const;
  [[nodiscard]] double real(const std::string& section, const std::string& key) const;
  [[nodiscard]] const std::string& text(const std::string& section, const std::string& key) const;
  [[nodiscard]] const std::vector<double>& reals(const std::string& section, const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& section, const std::string& key) const;
  /// For real_or_auto keys: true when the value is "auto".
  [[nodiscard]] bool is_auto(const std::string& section, const std::string& key) const;

  /// Sections in schema order, dotted keys as nested objects.
  [[nodiscard]] Json to_json() const;

 private:
  void set_json(const std::string& section, const std::string& key, const Json& value);
  [[nodiscard]] const Value& get(const std::string& section, const std::string& key) const;

  std::map<std::string, Value> values_;  // "section.key"
};

/// Markdown-free text listing of the schema (section, key, type, default, doc).
std::string describe_schema();

}  // namespace perilimit::cli
