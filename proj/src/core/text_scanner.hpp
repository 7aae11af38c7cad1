#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

#include "guikit/action.hpp"
#include "guikit/error.hpp"

namespace guikit::detail {

/// Cursor over untrusted text. Every accessor is bounds-checked and reports
/// problems as guikit::Error, so arbitrary bytes never crash a parser.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool eof() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return eof() ? '\0' : text_[pos_]; }
  std::size_t position() const noexcept { return pos_; }
  std::string_view rest() const noexcept { return text_.substr(pos_); }

  void skip_ws() noexcept {
    while (!eof() && is_space(text_[pos_])) ++pos_;
  }

  bool consume(char c) noexcept {
    if (peek() != c || eof()) return false;
    ++pos_;
    return true;
  }

  bool consume(std::string_view word) noexcept {
    if (rest().substr(0, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void expect(char c, std::string_view context) {
    skip_ws();
    if (!consume(c)) {
      syntax(std::string("expected '") + c + "' " + std::string(context));
    }
  }

  std::string quoted() {
    const char q = peek();
    if (q != '"' && q != '\'') syntax("expected a quoted string");
    ++pos_;
    std::string out;
    while (!eof()) {
      const char c = text_[pos_++];
      if (c == q) return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (eof()) break;
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case '\\':
        case '"':
        case '\'': out.push_back(e); break;
        default:
          out.push_back('\\');
          out.push_back(e);
      }
    }
    syntax("unterminated string");
  }

  long long integer() {
    skip_ws();
    long long v = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) syntax("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  double number(ErrorCode on_error, std::string_view what) {
    skip_ws();
    double v = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail(on_error, "expected a number in " + std::string(what) + at());
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  Point point(std::string_view what) {
    skip_ws();
    if (!consume('[')) fail(ErrorCode::MalformedPoint, "expected '[' for " + std::string(what) + at());
    Point p;
    p.y = number(ErrorCode::MalformedPoint, what);
    skip_ws();
    if (!consume(',')) fail(ErrorCode::MalformedPoint, std::string(what) + " needs two coordinates" + at());
    p.x = number(ErrorCode::MalformedPoint, what);
    skip_ws();
    if (!consume(']')) fail(ErrorCode::MalformedPoint, std::string(what) + " must have exactly two coordinates" + at());
    return p;
  }

  [[noreturn]] void syntax(const std::string& message) const {
    fail(ErrorCode::Syntax, message + at());
  }

  std::string at() const { return " at offset " + std::to_string(pos_); }

  static bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && Scanner::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && Scanner::is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace guikit::detail
