#pragma once

// Reader for the small TOML subset used by equation and run files, producing
// nlohmann::json. Supported: comments, [table] and [a.b] headers, bare or
// quoted keys, strings, integers, booleans, (multi-line) arrays and inline
// tables. A document whose first character is '{' is read as JSON.

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace laurentlab {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  std::size_t line;
};

namespace detail {

class TomlReader {
 public:
  explicit TomlReader(std::string_view s) : s_(s) {}

  json read() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        std::vector<std::string> path{key()};
        skip_inline_ws();
        while (accept('.')) path.push_back(key());
        expect(']');
        table = &root;
        for (const auto& k : path) {
          json& next = (*table)[k];
          if (next.is_null()) next = json::object();
          if (!next.is_object()) fail("'" + k + "' is not a table");
          table = &next;
        }
        end_of_line();
        continue;
      }
      std::string k = key();
      skip_inline_ws();
      expect('=');
      if (table->contains(k)) fail("duplicate key '" + k + "'");
      (*table)[k] = value();
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    throw ConfigError(what, line);
  }
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }
  void skip_comment() {
    if (!eof() && peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (true) {
      skip_inline_ws();
      skip_comment();
      if (!eof() && peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }
  // Whitespace, comments and newlines, as allowed inside arrays.
  void skip_all_ws() { skip_blank_lines(); }
  bool accept(char c) {
    skip_inline_ws();
    if (!eof() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected text after value");
    ++pos_;
  }

  std::string key() {
    skip_inline_ws();
    if (!eof() && peek() == '"') return string();
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      char e = s_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
  }

  json value() {
    skip_inline_ws();
    if (eof()) fail("expected a value");
    char c = peek();
    if (c == '"') return string();
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      skip_all_ws();
      if (accept(']')) return arr;
      while (true) {
        skip_all_ws();
        arr.push_back(value());
        skip_all_ws();
        if (accept(',')) {
          skip_all_ws();
          if (accept(']')) return arr;
          continue;
        }
        if (accept(']')) return arr;
        fail("expected ',' or ']' in array");
      }
    }
    if (c == '{') {
      ++pos_;
      json obj = json::object();
      if (accept('}')) return obj;
      while (true) {
        std::string k = key();
        expect('=');
        if (obj.contains(k)) fail("duplicate key '" + k + "'");
        obj[k] = value();
        if (accept(',')) continue;
        if (accept('}')) return obj;
        fail("expected ',' or '}' in inline table");
      }
    }
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '-' || c == '+') ++pos_;
      while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      std::string digits;
      for (char d : s_.substr(start, pos_ - start))
        if (d != '_') digits += d;
      if (digits == "-" || digits == "+") fail("expected digits");
      try {
        return std::stoll(digits);
      } catch (const std::out_of_range&) {
        fail("integer out of range");
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline json parse_config(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(e.what(), 0);
    }
  }
  return detail::TomlReader(text).read();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace laurentlab
