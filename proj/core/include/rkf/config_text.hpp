#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rkf {

/// Value in the sectioned key = value config format: a number, a quoted
/// string, or a bracketed list of values (nested lists form matrices).
struct ConfigValue {
  enum class Kind { Number, String, List };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;
  int line = 0;

  static ConfigValue of(double v);
  static ConfigValue of(std::string s);
  static ConfigValue list(std::vector<ConfigValue> items);
};

/// Parsed document. Keys before the first header live in section "".
class ConfigDocument {
 public:
  using Section = std::map<std::string, ConfigValue>;

  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  bool has(const std::string& section, const std::string& key) const;
  /// Throws ConfigError "missing key 'key' in [section]".
  const ConfigValue& get(const std::string& section, const std::string& key) const;
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  /// Section names in order of first appearance.
  const std::vector<std::string>& section_order() const { return order_; }
  const Section& section(const std::string& name) const;

  void set(const std::string& section, const std::string& key, ConfigValue value);

 private:
  std::map<std::string, Section> sections_;
  std::vector<std::string> order_;
};

/// Throws ConfigError with the offending line number.
ConfigDocument parse_config_text(std::string_view text);
std::string format_config_text(const ConfigDocument& doc);
std::string format_value(const ConfigValue& value);

// Typed accessors; errors name the section and key.
double as_number(const ConfigValue& v, const std::string& where);
int as_int(const ConfigValue& v, const std::string& where);
std::string as_string(const ConfigValue& v, const std::string& where);
const std::vector<ConfigValue>& as_list(const ConfigValue& v, const std::string& where);

}  // namespace rkf
