#pragma once

// Text format for polynomial systems:
//
//   system  := item ((';' | newline) item)*
//   expr    := term (('+' | '-') term)*
//   term    := factor ('*' factor)*
//   factor  := ('+' | '-') factor | power
//   power   := primary ('^' integer)?
//   primary := number | variable | '(' expr ')'
//
// Variables are x1..xn; x, y, z are accepted as aliases when n <= 3.
// '#' starts a comment that runs to the end of the line. Empty items are
// skipped. Newlines inside parentheses do not separate items.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "realrad/errors.hpp"
#include "realrad/polynomial.hpp"

namespace realrad {

namespace detail {

class SystemParser {
 public:
  SystemParser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  std::vector<Polynomial> parse() {
    if (nvars_ == 0) throw std::invalid_argument("number of variables must be positive");
    std::vector<Polynomial> out;
    for (;;) {
      skip_space(true);
      if (at_end()) break;
      if (peek() == ';' || peek() == '\n') {
        ++pos_;
        continue;
      }
      out.push_back(expr());
      skip_space(false);
      if (at_end()) break;
      if (peek() != ';' && peek() != '\n') fail("expected ';' or newline");
      ++pos_;
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  // Skips blanks and comments; newlines too when inside parentheses or when
  // asked to (between items).
  void skip_space(bool newlines) {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (c == '\n') {
        if (!(newlines || depth_ > 0)) return;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      skip_space(false);
      if (at_end()) return acc;
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      skip_space(false);
      if (at_end() || peek() != '*') return acc;
      ++pos_;
      acc = acc * factor();
    }
  }

  Polynomial factor() {
    skip_space(false);
    if (at_end()) fail("unexpected end of input");
    if (peek() == '-') {
      ++pos_;
      return -factor();
    }
    if (peek() == '+') {
      ++pos_;
      return factor();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    skip_space(false);
    if (at_end() || peek() != '^') return base;
    ++pos_;
    skip_space(false);
    std::size_t start = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("exponent must be a non-negative integer");
    unsigned long e = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      e = e * 10 + static_cast<unsigned long>(peek() - '0');
      if (e > 1000) {
        pos_ = start;
        fail("exponent too large");
      }
      ++pos_;
    }
    if (!at_end() && (peek() == '.' || peek() == 'e' || peek() == 'E')) {
      pos_ = start;
      fail("exponent must be a non-negative integer");
    }
    Polynomial r = Polynomial::constant(nvars_, 1.0);
    for (unsigned long i = 0; i < e; ++i) r = r * base;
    return r;
  }

  Polynomial primary() {
    skip_space(false);
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == '(') {
      ++pos_;
      ++depth_;
      Polynomial p = expr();
      skip_space(false);
      if (at_end() || peek() != ')') fail("expected ')'");
      --depth_;
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return variable();
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial number() {
    std::string buf(text_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - buf.c_str());
    if (used == 0) fail("malformed number");
    pos_ += used;
    return Polynomial::constant(nvars_, v);
  }

  Polynomial variable() {
    std::size_t start = pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    std::size_t j = nvars_;
    if (nvars_ <= 3 && name.size() == 1 && name[0] >= 'x' && name[0] <= 'z') {
      j = static_cast<std::size_t>(name[0] - 'x');
    } else if (name.size() > 1 && name[0] == 'x' &&
               name.find_first_not_of("0123456789", 1) == std::string::npos) {
      unsigned long idx = std::stoul(name.substr(1));
      if (idx >= 1 && idx <= nvars_) j = idx - 1;
    }
    if (j >= nvars_) {
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    return Polynomial::monomial(Monomial::variable(nvars_, j));
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Parses a ';'- or newline-separated list of polynomials in n variables.
/// Throws ParseError (with byte offset) on malformed input.
inline std::vector<Polynomial> parse_system(std::string_view text, std::size_t nvars) {
  return detail::SystemParser(text, nvars).parse();
}

inline Polynomial parse_polynomial(std::string_view text, std::size_t nvars) {
  auto ps = parse_system(text, nvars);
  if (ps.size() != 1) throw ParseError("expected exactly one polynomial", 0);
  return ps.front();
}

}  // namespace realrad
