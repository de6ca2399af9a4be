#include "tpq/toml.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace tpq::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  Document run() {
    Document doc;
    doc.tables.push_back(Table{{}, {}, 1});
    Table* cur = &doc.tables.back();
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const int at = line_;
        ++pos_;
        if (peek() == '[') fail(line_, "arrays of tables are not supported");
        std::vector<std::string> path;
        while (true) {
          skip_ws();
          path.push_back(read_key());
          skip_ws();
          if (peek() == '.') {
            ++pos_;
            continue;
          }
          break;
        }
        expect(']');
        end_of_line();
        for (const auto& t : doc.tables) {
          if (t.path == path) fail(at, "duplicate table [" + t.name() + "]");
        }
        doc.tables.push_back(Table{path, {}, at});
        cur = &doc.tables.back();
        continue;
      }
      const int at = line_;
      std::string k = read_key();
      skip_ws();
      expect('=');
      skip_ws();
      Value v = read_value();
      end_of_line();
      if (cur->find(k)) fail(at, "duplicate key '" + k + "'");
      cur->entries.push_back(Entry{std::move(k), std::move(v)});
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  void advance() {
    if (s_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      break;
    }
  }

  // whitespace, comments and newlines inside arrays
  void skip_array_space() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail(line_, std::string("unexpected '") + peek() + "' after value");
    advance();
  }

  void expect(char c) {
    if (peek() != c) {
      fail(line_, std::string("expected '") + c + "'" + (eof() ? " before end of file" : ""));
    }
    ++pos_;
  }

  std::string read_key() {
    if (peek() == '"') return read_string();
    std::string out;
    while (!eof() && bare_char(peek())) out += s_[pos_++];
    if (out.empty()) fail(line_, "expected a key");
    return out;
  }

  std::string read_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail(line_, "unterminated string");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail(line_, "unterminated string");
        char e = s_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(line_, std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  Value read_value() {
    Value v;
    v.line = line_;
    char c = peek();
    if (c == '"') {
      v.v = read_string();
    } else if (c == '[') {
      ++pos_;
      Value::Array arr;
      skip_array_space();
      while (peek() != ']') {
        arr.push_back(read_value());
        skip_array_space();
        if (peek() == ',') {
          ++pos_;
          skip_array_space();
          continue;
        }
        if (peek() != ']') fail(line_, "expected ',' or ']' in array");
      }
      ++pos_;
      v.v = std::move(arr);
    } else if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.v = true;
    } else if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.v = false;
    } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '+') ++start;
      ++pos_;
      while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      std::string digits;
      for (std::size_t i = start; i < pos_; ++i) {
        if (s_[i] != '_') digits += s_[i];
      }
      std::int64_t x = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
      if (ec != std::errc() || p != digits.data() + digits.size()) fail(line_, "bad integer '" + digits + "'");
      v.v = x;
    } else {
      fail(line_, eof() ? "missing value" : std::string("unexpected '") + c + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

const std::string& Value::as_string() const {
  if (!is_string()) fail(line, "expected a string");
  return std::get<std::string>(v);
}

std::int64_t Value::as_int() const {
  if (!is_int()) fail(line, "expected an integer");
  return std::get<std::int64_t>(v);
}

bool Value::as_bool() const {
  if (!is_bool()) fail(line, "expected true or false");
  return std::get<bool>(v);
}

const Value::Array& Value::as_array() const {
  if (!is_array()) fail(line, "expected an array");
  return std::get<Array>(v);
}

std::vector<std::string> Value::as_strings() const {
  std::vector<std::string> out;
  for (const auto& x : as_array()) out.push_back(x.as_string());
  return out;
}

std::string Table::name() const {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += '.';
    out += p;
  }
  return out;
}

const Value* Table::find(std::string_view k) const {
  for (const auto& e : entries) {
    if (e.key == k) return &e.value;
  }
  return nullptr;
}

const Table* Document::find(std::string_view dotted) const {
  for (const auto& t : tables) {
    if (!t.path.empty() && t.name() == dotted) return &t;
  }
  return nullptr;
}

std::vector<const Table*> Document::children(std::string_view prefix) const {
  std::vector<const Table*> out;
  for (const auto& t : tables) {
    if (t.path.size() < 2) continue;
    std::vector<std::string> head(t.path.begin(), t.path.end() - 1);
    Table probe{head, {}, 0};
    if (probe.name() == prefix) out.push_back(&t);
  }
  return out;
}

Document parse(std::string_view text) { return Reader(text).run(); }

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + '"';
}

std::string key(std::string_view k) {
  bool bare = !k.empty();
  for (char c : k) bare = bare && bare_char(c);
  return bare ? std::string(k) : quote(k);
}

}  // namespace tpq::toml
