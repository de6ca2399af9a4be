#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tpq::toml {

/// The TOML subset used by structure files: [dotted.table] headers, bare or
/// quoted keys, basic strings, integers, booleans and (nested, possibly
/// multi-line) arrays. No inline tables, arrays of tables, floats or dates.
struct Value {
  using Array = std::vector<Value>;
  std::variant<std::string, std::int64_t, bool, Array> v;
  int line = 0;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
  // these throw ParseError naming the line on a type mismatch
  const std::string& as_string() const;
  std::int64_t as_int() const;
  bool as_bool() const;
  const Array& as_array() const;
  std::vector<std::string> as_strings() const;
};

struct Entry {
  std::string key;
  Value value;
};

struct Table {
  std::vector<std::string> path;  // empty for the root table
  std::vector<Entry> entries;
  int line = 0;

  std::string name() const;
  const Value* find(std::string_view key) const;
};

struct Document {
  std::vector<Table> tables;  // root first, then in file order

  const Table* find(std::string_view dotted) const;
  /// Tables whose path is `prefix` plus exactly one more segment.
  std::vector<const Table*> children(std::string_view prefix) const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Document parse(std::string_view text);

/// Writing helpers.
std::string quote(std::string_view s);
std::string key(std::string_view k);  // bare when possible

}  // namespace tpq::toml
