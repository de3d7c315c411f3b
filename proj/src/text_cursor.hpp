#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "rankone/errors.hpp"

namespace rankone::detail {

// Character cursor with 1-based line/column tracking for the small parsers.
class TextCursor {
 public:
  explicit TextCursor(std::string_view text, int line = 1, int column = 1)
      : text_(text), line_(line), column_(column) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  int line() const { return line_; }
  int column() const { return column_; }

  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    get();
    return true;
  }

  bool accept(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    for (std::size_t i = 0; i < word.size(); ++i) get();
    return true;
  }

  std::string identifier() {
    skip_space();
    std::string out;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) out += get();
    if (out.empty()) fail("expected identifier");
    return out;
  }

  std::string digits() {
    skip_space();
    std::string out;
    if (peek() == '-') out += get();
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) out += get();
    if (out.empty() || out == "-") fail("expected integer");
    return out;
  }

  std::int64_t integer() {
    int l = line_, c = column_;
    std::string d = digits();
    try {
      return std::stoll(d);
    } catch (const std::exception&) {
      throw ParseError("integer out of range", l, c);
    }
  }

  Scalar rational() {
    skip_space();
    int l = line_, c = column_;
    std::string text = digits();
    if (accept('/')) text += "/" + digits();
    try {
      return parse_rational(text);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), l, c);
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

}  // namespace rankone::detail
