#include "rkf/config_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "rkf/errors.hpp"

namespace rkf {

ConfigValue ConfigValue::of(double v) {
  ConfigValue out;
  out.kind = Kind::Number;
  out.number = v;
  return out;
}

ConfigValue ConfigValue::of(std::string s) {
  ConfigValue out;
  out.kind = Kind::String;
  out.text = std::move(s);
  return out;
}

ConfigValue ConfigValue::list(std::vector<ConfigValue> items) {
  ConfigValue out;
  out.kind = Kind::List;
  out.items = std::move(items);
  return out;
}

bool ConfigDocument::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const ConfigValue* ConfigDocument::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const ConfigValue& ConfigDocument::get(const std::string& section, const std::string& key) const {
  if (const auto* v = find(section, key)) return *v;
  throw ConfigError("missing key '" + key + "' in [" + section + "]");
}

const ConfigDocument::Section& ConfigDocument::section(const std::string& name) const {
  auto s = sections_.find(name);
  if (s == sections_.end()) throw ConfigError("missing section [" + name + "]");
  return s->second;
}

void ConfigDocument::set(const std::string& section, const std::string& key, ConfigValue value) {
  if (!sections_.count(section)) order_.push_back(section);
  sections_[section][key] = std::move(value);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Drop a trailing # comment that is not inside a string.
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

// Bracket depth change of a line, ignoring strings.
int bracket_balance(std::string_view s) {
  int depth = 0;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  ConfigValue parse() {
    ConfigValue v = value();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    return v;
  }

 private:
  ConfigValue value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    ConfigValue v;
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      std::vector<ConfigValue> items;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ']') {
        items.push_back(value());
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        } else if (pos_ < text_.size() && text_[pos_] != ']') {
          fail("expected ',' or ']'");
        }
      }
      if (pos_ >= text_.size()) fail("unterminated list");
      ++pos_;
      v = ConfigValue::list(std::move(items));
    } else if (c == '"') {
      const auto end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated string");
      v = ConfigValue::of(std::string(text_.substr(pos_ + 1, end - pos_ - 1)));
      pos_ = end + 1;
    } else {
      double number = 0.0;
      const char* begin = text_.data() + pos_;
      const char* first = begin;
      if (*first == '+') ++first;
      auto res = std::from_chars(first, text_.data() + text_.size(), number);
      if (res.ec != std::errc() || res.ptr == first) fail("expected a number, a quoted string or a list");
      pos_ += static_cast<std::size_t>(res.ptr - begin);
      v = ConfigValue::of(number);
    }
    v.line = line_;
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what + " (column " + std::to_string(pos_ + 1) + ")");
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ConfigDocument parse_config_text(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  std::string pending_key;
  std::string pending_value;
  int pending_line = 0;
  int depth = 0;

  auto commit = [&]() {
    if (doc.has(section, pending_key))
      throw ConfigError("line " + std::to_string(pending_line) + ": duplicate key '" + pending_key + "' in [" + section + "]");
    doc.set(section, pending_key, ValueParser(pending_value, pending_line).parse());
    pending_key.clear();
    pending_value.clear();
  };

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string raw = strip_comment(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    const std::string line = trim(raw);

    if (!pending_key.empty()) {
      pending_value += " " + line;
      depth += bracket_balance(line);
      if (depth <= 0) commit();
      continue;
    }
    if (line.empty()) continue;

    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_identifier(section)) throw ConfigError("line " + std::to_string(line_no) + ": invalid section name '" + section + "'");
      if (doc.has_section(section)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + section + "]");
      doc.set(section, "", ConfigValue{});  // registers the section
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    pending_key = trim(std::string_view(line).substr(0, eq));
    if (!valid_identifier(pending_key)) throw ConfigError("line " + std::to_string(line_no) + ": invalid key '" + pending_key + "'");
    pending_value = trim(std::string_view(line).substr(eq + 1));
    pending_line = line_no;
    depth = bracket_balance(pending_value);
    if (depth <= 0) commit();
  }
  if (!pending_key.empty())
    throw ConfigError("line " + std::to_string(pending_line) + ": unterminated list for key '" + pending_key + "'");
  return doc;
}

std::string format_value(const ConfigValue& value) {
  switch (value.kind) {
    case ConfigValue::Kind::Number:
      return format_number(value.number);
    case ConfigValue::Kind::String:
      return "\"" + value.text + "\"";
    case ConfigValue::Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < value.items.size(); ++i) {
        if (i) out += ", ";
        out += format_value(value.items[i]);
      }
      return out + "]";
    }
  }
  return {};
}

std::string format_config_text(const ConfigDocument& doc) {
  std::string out;
  for (const auto& name : doc.section_order()) {
    if (!name.empty()) out += (out.empty() ? "" : "\n") + std::string("[") + name + "]\n";
    for (const auto& [key, value] : doc.section(name)) {
      if (key.empty()) continue;
      out += key + " = " + format_value(value) + "\n";
    }
  }
  return out;
}

double as_number(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::Number) throw ConfigError(where + ": expected a number (line " + std::to_string(v.line) + ")");
  return v.number;
}

int as_int(const ConfigValue& v, const std::string& where) {
  const double x = as_number(v, where);
  if (std::floor(x) != x || std::fabs(x) > 1e9) throw ConfigError(where + ": expected an integer (line " + std::to_string(v.line) + ")");
  return static_cast<int>(x);
}

std::string as_string(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::String) throw ConfigError(where + ": expected a quoted string (line " + std::to_string(v.line) + ")");
  return v.text;
}

const std::vector<ConfigValue>& as_list(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::List) throw ConfigError(where + ": expected a list (line " + std::to_string(v.line) + ")");
  return v.items;
}

}  // namespace rkf
