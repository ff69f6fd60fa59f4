#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cobra::config {

struct ConfigValue;
using ConfigObject = std::map<std::string, ConfigValue>;

/// A node of a configuration tree: a scalar or a nested object. `raw` keeps
/// the source spelling of scalars so they can be read back as strings.
struct ConfigValue {
  std::variant<std::string, std::int64_t, bool, double, ConfigObject> value;
  std::string raw;
  std::size_t line = 0;
  std::size_t col = 0;

  [[nodiscard]] bool is_object() const { return std::holds_alternative<ConfigObject>(value); }
  [[nodiscard]] std::string_view type_name() const;

  /// Equality compares values only, not source positions.
  friend bool operator==(const ConfigValue& a, const ConfigValue& b) { return a.value == b.value; }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t line, std::size_t col, std::string message);

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t col() const { return col_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string message_;
};

class PathConflict : public std::runtime_error {
 public:
  PathConflict(std::string path, std::size_t line, std::size_t col);

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t col() const { return col_; }

 private:
  std::string path_;
  std::size_t line_;
  std::size_t col_;
};

/// Parsed configuration. Key segments are non-empty and never contain '.'.
class ConfigTree {
 public:
  ConfigTree() = default;
  explicit ConfigTree(std::string source) : source_(std::move(source)) {}

  [[nodiscard]] const ConfigObject& root() const { return root_; }
  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] bool empty() const { return root_.empty(); }

  /// Looks up a dotted path; nullptr if absent.
  [[nodiscard]] const ConfigValue* find(std::string_view path) const;

  /// Assigns at a path. Objects merge into existing objects; a scalar
  /// replaces whatever was there. Throws PathConflict when the path runs
  /// through an existing scalar, or an object is assigned over a scalar.
  void set(const std::vector<std::string>& path, ConfigValue value);
  void set(std::string_view dotted_path, ConfigValue value);

  /// All scalar leaves as (dotted path, value), in key order.
  [[nodiscard]] std::vector<std::pair<std::string, const ConfigValue*>> leaves() const;

  friend bool operator==(const ConfigTree& a, const ConfigTree& b) { return a.root_ == b.root_; }
  friend ConfigTree merge(const ConfigTree& base, const ConfigTree& over);

 private:
  ConfigObject root_;
  std::string source_;
};

/// Path-wise override: every leaf of `over` replaces the same path in `base`.
ConfigTree merge(const ConfigTree& base, const ConfigTree& over);

/// Parses the supported HOCON subset: `key = value`, `key: value`, dotted
/// keys, brace objects (with or without `=`), `#` and `//` comments, quoted
/// and unquoted strings, integers, floats and booleans. Later assignments
/// win. Throws SyntaxError or PathConflict.
ConfigTree parse_config(std::string_view text, std::string source = "<input>");

std::vector<std::string> split_path(std::string_view dotted);

}  // namespace cobra::config
